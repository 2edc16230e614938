//! Writes synthetic datasets described by a JSON spec file.
//!
//! The spec is an object with a `kind` of `ego`, `population` or `scale` and
//! the generator's fields. A missing `seed` is derived from the FNV-1a hash of
//! the canonical (key-sorted) spec JSON and recorded in the manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use socdiv::graph::{write_edge_list, FollowGraph, NodeId};
use socdiv::synthgen::{gen_ego, gen_population, gen_scale_graph, EgoGenSpec, PopulationGenSpec, ScaleGenSpec};

use crate::dataset::COVARIATES_KIND;
use crate::error::{CliError, Result};
use crate::io::{fnv1a, open_read, open_write, schema_line, write_err};
use crate::reputation::write_popularity;

pub const PLANTED_KIND: &str = "planted";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GenSpec {
    Ego(EgoGenSpec),
    Population(PopulationGenSpec),
    Scale(ScaleGenSpec),
}

#[derive(Debug, Clone)]
pub struct GenerateArgs {
    pub spec: PathBuf,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestFile {
    pub name: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub kind: String,
    pub seed: u64,
    pub seed_derived: bool,
    pub spec: GenSpec,
    pub nodes: usize,
    pub edges: usize,
    pub files: Vec<ManifestFile>,
}

/// Parses a spec, filling in a derived seed when absent.
pub fn parse_spec(text: &str) -> Result<(GenSpec, bool)> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| CliError::input(format!("spec: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| CliError::input("spec: expected a JSON object"))?;
    let derived = !obj.contains_key("seed");
    if derived {
        let canonical = serde_json::to_string(obj).expect("json value");
        obj.insert("seed".into(), Value::from(fnv1a(&canonical)));
    }
    let spec: GenSpec = serde_json::from_value(value).map_err(|e| CliError::input(format!("spec: {e}")))?;
    let checked = match &spec {
        GenSpec::Ego(s) => s.validate(),
        GenSpec::Population(s) => s.validate(),
        GenSpec::Scale(s) => s.validate(),
    };
    checked.map_err(|e| CliError::input(format!("spec: {e}")))?;
    Ok((spec, derived))
}

fn spec_seed(spec: &GenSpec) -> u64 {
    match spec {
        GenSpec::Ego(s) => s.seed,
        GenSpec::Population(s) => s.seed,
        GenSpec::Scale(s) => s.seed,
    }
}

fn write_file(dir: &Path, name: &str, files: &mut Vec<ManifestFile>, body: impl FnOnce(&mut dyn Write) -> std::io::Result<usize>) -> Result<()> {
    let path = dir.join(name);
    let mut out = open_write(Some(&path))?;
    let rows = body(&mut out).map_err(write_err(Some(&path)))?;
    out.flush().map_err(write_err(Some(&path)))?;
    files.push(ManifestFile { name: name.into(), rows });
    Ok(())
}

fn write_graph_files(dir: &Path, g: &FollowGraph, egos: &[NodeId], files: &mut Vec<ManifestFile>) -> Result<()> {
    write_file(dir, "edges.tsv", files, |out| {
        write_edge_list(&mut *out, g.edges())?;
        Ok(g.edge_count())
    })?;
    write_file(dir, "egos.txt", files, |out| {
        for e in egos {
            writeln!(out, "{e}")?;
        }
        Ok(egos.len())
    })
}

/// Generates the data files into `out_dir` and returns the manifest.
pub fn generate(spec: &GenSpec, derived: bool, out_dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut files = Vec::new();
    let bad = |e: socdiv::synthgen::SynthError| CliError::input(format!("spec: {e}"));
    let (kind, g) = match spec {
        GenSpec::Ego(s) => {
            let (g, ego) = gen_ego(s).map_err(bad)?;
            write_graph_files(out_dir, &g, &[ego], &mut files)?;
            ("ego", g)
        }
        GenSpec::Scale(s) => {
            let g = gen_scale_graph(s).map_err(bad)?;
            write_graph_files(out_dir, &g, g.nodes(), &mut files)?;
            ("scale", g)
        }
        GenSpec::Population(s) => {
            let p = gen_population(s).map_err(bad)?;
            write_graph_files(out_dir, &p.graph, &p.egos, &mut files)?;
            write_file(out_dir, "popularity.csv", &mut files, |out| {
                write_popularity(out, &p.records)?;
                Ok(p.records.len())
            })?;
            write_file(out_dir, "covariates.csv", &mut files, |out| {
                writeln!(out, "{}", schema_line(COVARIATES_KIND))?;
                writeln!(out, "user,answers,gender_male,gender_female")?;
                for c in &p.covariates {
                    writeln!(out, "{},{},{},{}", c.user, c.answers, u8::from(c.gender == 1), u8::from(c.gender == 2))?;
                }
                Ok(p.covariates.len())
            })?;
            write_file(out_dir, "planted.csv", &mut files, |out| {
                writeln!(out, "{}", schema_line(PLANTED_KIND))?;
                writeln!(out, "user,indegree,groups,normalized_diversity,latent")?;
                for e in &p.planted {
                    writeln!(out, "{},{},{},{},{}", e.user, e.indegree, e.groups, e.normalized_diversity, e.latent)?;
                }
                Ok(p.planted.len())
            })?;
            ("population", p.graph)
        }
    };
    let manifest = Manifest {
        kind: kind.into(),
        seed: spec_seed(spec),
        seed_derived: derived,
        spec: spec.clone(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        files,
    };
    let path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("plain data");
    fs::write(&path, format!("{text}\n")).map_err(|e| CliError::io(&path, e))?;
    Ok(manifest)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<Manifest> {
    let mut text = String::new();
    std::io::Read::read_to_string(&mut open_read(&args.spec)?, &mut text).map_err(|e| CliError::io(&args.spec, e))?;
    let (spec, derived) = parse_spec(&text)?;
    generate(&spec, derived, &args.out_dir)
}
