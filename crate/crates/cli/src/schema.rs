//! On-disk JSON formats.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use treeaut::autom::{TreeAut, TreeGroup};
use treeaut::perm::{LocalActionPair, Perm, PermGroup};
use treeaut::tree::{HalfTree, Vertex};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// `{"degree": d, "F": [cycles], "Fprime": [cycles]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairFile {
    pub degree: usize,
    #[serde(rename = "F")]
    pub f: Vec<String>,
    #[serde(rename = "Fprime")]
    pub fprime: Vec<String>,
}

/// `{"root_image": "01", "radius": 1, "portrait": {"": "(0 1)", "0": "()", …}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutFile {
    pub root_image: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    pub portrait: BTreeMap<String, String>,
}

/// `{"degree": d, "generators": [cycles]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<String>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn group(degree: usize, gens: &[String], what: &str) -> Result<PermGroup, CliError> {
    PermGroup::from_cycle_strings(degree, gens).map_err(|e| CliError::validation(format!("{what}: {e}")))
}

pub fn load_pair(path: &Path) -> Result<(PairFile, LocalActionPair), CliError> {
    let file: PairFile = read_json(path)?;
    let f = group(file.degree, &file.f, "F")?;
    let fp = group(file.degree, &file.fprime, "Fprime")?;
    let pair = LocalActionPair::new(f, fp).map_err(|e| CliError::validation(e.to_string()))?;
    Ok((file, pair))
}

pub fn load_tree_group(path: &Path) -> Result<(PairFile, Arc<TreeGroup>), CliError> {
    let (file, pair) = load_pair(path)?;
    let group = TreeGroup::new(pair).map_err(|e| CliError::validation(e.to_string()))?;
    Ok((file, group))
}

pub fn load_group(path: &Path) -> Result<(GroupFile, PermGroup), CliError> {
    let file: GroupFile = read_json(path)?;
    let g = group(file.degree, &file.generators, "generators")?;
    Ok((file, g))
}

pub fn parse_vertex(text: &str, degree: usize) -> Result<Vertex, CliError> {
    Vertex::parse(text, degree).map_err(|e| CliError::validation(e.to_string()))
}

pub fn parse_halftree(text: &str, degree: usize) -> Result<HalfTree, CliError> {
    HalfTree::parse(text, degree).map_err(|e| CliError::validation(e.to_string()))
}

pub fn aut_from_file(file: &AutFile, group: &Arc<TreeGroup>) -> Result<TreeAut, CliError> {
    let d = group.degree();
    let mut portrait = BTreeMap::new();
    for (k, v) in &file.portrait {
        let vertex = parse_vertex(k, d)?;
        let perm = Perm::parse(v, d).map_err(|e| CliError::validation(format!("portrait at `{k}`: {e}")))?;
        if portrait.insert(vertex, perm).is_some() {
            return Err(CliError::validation(format!("portrait lists vertex `{k}` twice")));
        }
    }
    let radius = match file.radius {
        Some(r) => r,
        None => portrait.keys().map(|v| v.len()).max().unwrap_or(0),
    };
    let root_image = parse_vertex(&file.root_image, d)?;
    group
        .element(root_image, radius, &portrait)
        .map_err(|e| CliError::validation(e.to_string()))
}

pub fn load_aut(path: &Path, group: &Arc<TreeGroup>) -> Result<TreeAut, CliError> {
    let file: AutFile = read_json(path)?;
    aut_from_file(&file, group).map_err(|e| CliError { message: format!("{}: {}", path.display(), e.message), ..e })
}

/// The canonical file for an element: its portrait on the ball of radius `radius()`.
pub fn aut_to_file(g: &TreeAut) -> AutFile {
    let d = g.degree();
    AutFile {
        root_image: g.root_image().render(d),
        radius: Some(g.radius()),
        portrait: g
            .portrait()
            .into_iter()
            .map(|(v, p)| (v.render(d), p.to_string()))
            .collect(),
    }
}
