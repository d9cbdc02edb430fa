//! JSON space and operator files.
//!
//! A space file holds `{"name", "dim", "dual_vertices"}` with an optional
//! `"primal_vertices"` list that the derived vertices must match. Rationals
//! are strings in `p/q` form. An operator file holds `{"domain",
//! "codomain", "matrix"}`, where each space is either a catalog
//! expression, a path to a space file (relative to the operator file), or
//! an inline space object.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::exact::{Matrix, Vector};
use crate::preserve::Operator;
use crate::space::PolyhedralSpace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub name: String,
    pub dim: usize,
    pub dual_vertices: Vec<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primal_vertices: Option<Vec<Vector>>,
}

impl SpaceFile {
    pub fn from_space(space: &PolyhedralSpace) -> Self {
        SpaceFile {
            name: space.name().to_string(),
            dim: space.dim(),
            dual_vertices: space.dual_vertices().to_vec(),
            primal_vertices: Some(space.primal_vertices().to_vec()),
        }
    }

    pub fn build(&self) -> Result<PolyhedralSpace> {
        PolyhedralSpace::build_checked(
            self.name.clone(),
            self.dim,
            self.dual_vertices.clone(),
            self.primal_vertices.clone(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Named(String),
    Inline(SpaceFile),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub domain: SpaceRef,
    pub codomain: SpaceRef,
    pub matrix: Matrix,
}

impl OperatorFile {
    pub fn from_operator(op: &Operator) -> Self {
        OperatorFile {
            domain: SpaceRef::Named(op.domain().name().to_string()),
            codomain: SpaceRef::Named(op.codomain().name().to_string()),
            matrix: op.matrix().clone(),
        }
    }
}

pub fn parse_space_file(text: &str) -> Result<PolyhedralSpace> {
    let file: SpaceFile = serde_json::from_str(text)?;
    file.build()
}

pub fn load_space_file(path: &Path) -> Result<PolyhedralSpace> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_space_file(&text)
}

pub fn space_to_json(space: &PolyhedralSpace) -> String {
    serde_json::to_string_pretty(&SpaceFile::from_space(space)).expect("space serializes")
}

/// Resolves `--space` style arguments: an existing file path, otherwise a
/// catalog expression.
pub fn resolve_space(reference: &str, base: Option<&Path>) -> Result<PolyhedralSpace> {
    let path = match base {
        Some(dir) => dir.join(reference),
        None => PathBuf::from(reference),
    };
    if path.is_file() {
        return load_space_file(&path);
    }
    catalog::parse_space(reference)
}

fn build_ref(reference: &SpaceRef, base: Option<&Path>) -> Result<PolyhedralSpace> {
    match reference {
        SpaceRef::Named(name) => resolve_space(name, base),
        SpaceRef::Inline(file) => file.build(),
    }
}

pub fn parse_operator_file(text: &str, base: Option<&Path>) -> Result<Operator> {
    let file: OperatorFile = serde_json::from_str(text)?;
    let domain = Arc::new(build_ref(&file.domain, base)?);
    let codomain = if file.codomain == file.domain {
        domain.clone()
    } else {
        Arc::new(build_ref(&file.codomain, base)?)
    };
    Operator::new(domain, codomain, file.matrix)
}

pub fn load_operator_file(path: &Path) -> Result<Operator> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_operator_file(&text, path.parent())
}

pub fn operator_to_json(op: &Operator) -> String {
    serde_json::to_string_pretty(&OperatorFile::from_operator(op)).expect("operator serializes")
}
