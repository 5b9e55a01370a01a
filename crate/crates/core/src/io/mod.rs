//! File formats: mesh input, VTK and CSV output.

pub mod gmsh;
pub mod vtk;

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub use gmsh::{format_gmsh, parse_gmsh, read_gmsh, write_gmsh};
pub use vtk::{format_vtk, write_vtk, CellField};

/// Minimal CSV table with a fixed header.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Fixed-precision float formatting used in all tables.
pub fn num(x: f64) -> String {
    format!("{x:.12e}")
}
