//! Legacy ASCII VTK output of cell fields.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};

pub enum CellField<'a> {
    Scalar(&'a str, &'a [f64]),
    /// Vectors are padded to three components.
    Vector(&'a str, &'a [Point]),
}

pub fn format_vtk(mesh: &Mesh, title: &str, fields: &[CellField]) -> Result<String> {
    let nc = mesh.num_cells();
    for f in fields {
        let (name, len) = match f {
            CellField::Scalar(n, v) => (n, v.len()),
            CellField::Vector(n, v) => (n, v.len()),
        };
        if len != nc {
            return Err(Error::Contract(format!("cell field {name} has {len} values for {nc} cells")));
        }
    }
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "{}", title.replace('\n', " "));
    s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.nodes.len());
    for p in &mesh.nodes {
        let _ = writeln!(s, "{:e} {:e} {:e}", p.x, p.y, p.z);
    }
    let per = mesh.dim + 1;
    let _ = writeln!(s, "CELLS {} {}", nc, nc * (per + 1));
    for c in &mesh.cells {
        let _ = write!(s, "{per}");
        for n in &c.nodes {
            let _ = write!(s, " {n}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "CELL_TYPES {nc}");
    let code = if mesh.dim == 2 { 5 } else { 10 };
    for _ in 0..nc {
        let _ = writeln!(s, "{code}");
    }
    let _ = writeln!(s, "CELL_DATA {nc}");
    for f in fields {
        match f {
            CellField::Scalar(name, v) => {
                let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
                for x in *v {
                    let _ = writeln!(s, "{x:e}");
                }
            }
            CellField::Vector(name, v) => {
                let _ = writeln!(s, "VECTORS {name} double");
                for x in *v {
                    let z = if mesh.dim == 2 { 0.0 } else { x.z };
                    let _ = writeln!(s, "{:e} {:e} {:e}", x.x, x.y, z);
                }
            }
        }
    }
    Ok(s)
}

pub fn write_vtk(path: &Path, mesh: &Mesh, title: &str, fields: &[CellField]) -> Result<()> {
    let text = format_vtk(mesh, title, fields)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
