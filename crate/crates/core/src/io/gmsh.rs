//! Reader and writer for the version 2.2 ASCII mesh layout.
//!
//! Cells are the elements of the highest dimension present. Elements one
//! dimension lower that carry a physical tag become named face groups; the
//! name comes from `$PhysicalNames` when present and is `physical_<tag>`
//! otherwise.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{FaceGroup, Point, RawMesh};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        location: format!("line {line}"),
        message: message.into(),
    }
}

/// Element dimension and node count for the supported type codes.
fn element_shape(code: u32) -> Option<(usize, usize)> {
    match code {
        15 => Some((0, 1)),
        1 => Some((1, 2)),
        2 => Some((2, 3)),
        3 => Some((2, 4)),
        4 => Some((3, 4)),
        5 => Some((3, 8)),
        6 => Some((3, 6)),
        7 => Some((3, 5)),
        _ => None,
    }
}

struct Lines<'a> {
    it: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<&'a str> {
        for (i, l) in self.it.by_ref() {
            self.line = i + 1;
            let t = l.trim();
            if !t.is_empty() {
                return Some(t);
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<&'a str> {
        self.next()
            .ok_or_else(|| parse_err(self.line + 1, format!("unexpected end of file, expected {what}")))
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let l = self.expect(what)?;
        l.parse()
            .map_err(|_| parse_err(self.line, format!("expected {what}, found '{l}'")))
    }
}

pub fn parse_gmsh(text: &str) -> Result<RawMesh> {
    let mut lines = Lines {
        it: text.lines().enumerate(),
        line: 0,
    };
    let mut names: HashMap<u32, String> = HashMap::new();
    let mut nodes: Vec<Point> = Vec::new();
    let mut node_index: HashMap<u64, usize> = HashMap::new();
    // (dimension, physical tag, node ids) in file order.
    let mut elements: Vec<(usize, u32, Vec<u64>, usize, u32)> = Vec::new();
    let mut saw_format = false;
    while let Some(l) = lines.next() {
        match l {
            "$MeshFormat" => {
                let f = lines.expect("format line")?;
                let mut parts = f.split_whitespace();
                let version = parts.next().unwrap_or("");
                if !version.starts_with("2.") {
                    return Err(parse_err(lines.line, format!("unsupported format version {version}")));
                }
                if parts.next() != Some("0") {
                    return Err(parse_err(lines.line, "binary files are not supported"));
                }
                saw_format = true;
                if lines.expect("$EndMeshFormat")? != "$EndMeshFormat" {
                    return Err(parse_err(lines.line, "expected $EndMeshFormat"));
                }
            }
            "$PhysicalNames" => {
                let n = lines.count("number of physical names")?;
                for _ in 0..n {
                    let l = lines.expect("physical name")?;
                    let mut parts = l.splitn(3, char::is_whitespace);
                    let _dim = parts.next();
                    let tag: u32 = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| parse_err(lines.line, "malformed physical name"))?;
                    let name = parts.next().unwrap_or("").trim().trim_matches('"').to_string();
                    names.insert(tag, name);
                }
                if lines.expect("$EndPhysicalNames")? != "$EndPhysicalNames" {
                    return Err(parse_err(lines.line, "expected $EndPhysicalNames"));
                }
            }
            "$Nodes" => {
                let n = lines.count("number of nodes")?;
                for _ in 0..n {
                    let l = lines.expect("node")?;
                    let v: Vec<&str> = l.split_whitespace().collect();
                    if v.len() != 4 {
                        return Err(parse_err(lines.line, "node lines need an id and three coordinates"));
                    }
                    let id: u64 = v[0].parse().map_err(|_| parse_err(lines.line, "bad node id"))?;
                    let mut x = [0.0; 3];
                    for a in 0..3 {
                        x[a] = v[a + 1]
                            .parse()
                            .map_err(|_| parse_err(lines.line, format!("bad coordinate '{}'", v[a + 1])))?;
                    }
                    if node_index.insert(id, nodes.len()).is_some() {
                        return Err(parse_err(lines.line, format!("duplicate node id {id}")));
                    }
                    nodes.push(Point::new(x[0], x[1], x[2]));
                }
                if lines.expect("$EndNodes")? != "$EndNodes" {
                    return Err(parse_err(lines.line, "expected $EndNodes"));
                }
            }
            "$Elements" => {
                let n = lines.count("number of elements")?;
                for _ in 0..n {
                    let l = lines.expect("element")?;
                    let v: Vec<u64> = l
                        .split_whitespace()
                        .map(|t| t.parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| parse_err(lines.line, "bad integer in element line"))?;
                    if v.len() < 3 {
                        return Err(parse_err(lines.line, "truncated element line"));
                    }
                    let code = v[1] as u32;
                    let (dim, nn) = element_shape(code)
                        .ok_or_else(|| parse_err(lines.line, format!("unsupported element type {code}")))?;
                    let ntags = v[2] as usize;
                    if v.len() != 3 + ntags + nn {
                        return Err(parse_err(lines.line, "element line has the wrong number of entries"));
                    }
                    let phys = if ntags > 0 { v[3] as u32 } else { 0 };
                    elements.push((dim, phys, v[3 + ntags..].to_vec(), lines.line, code));
                }
                if lines.expect("$EndElements")? != "$EndElements" {
                    return Err(parse_err(lines.line, "expected $EndElements"));
                }
            }
            s if s.starts_with('$') => {
                // Skip unknown sections.
                let end = format!("$End{}", &s[1..]);
                loop {
                    if lines.expect(&end)? == end {
                        break;
                    }
                }
            }
            other => return Err(parse_err(lines.line, format!("unexpected content '{other}'"))),
        }
    }
    if !saw_format {
        return Err(parse_err(1, "missing $MeshFormat section"));
    }
    let dim = elements.iter().map(|e| e.0).max().unwrap_or(0);
    if dim < 2 {
        return Err(parse_err(lines.line, "no 2d or 3d elements found"));
    }
    let lookup = |id: u64, line: usize| -> Result<usize> {
        node_index
            .get(&id)
            .copied()
            .ok_or_else(|| parse_err(line, format!("unknown node id {id}")))
    };
    let mut cells = Vec::new();
    let mut groups: BTreeMap<u32, Vec<Vec<usize>>> = BTreeMap::new();
    for (edim, phys, ids, line, _code) in &elements {
        let conn: Vec<usize> = ids.iter().map(|&i| lookup(i, *line)).collect::<Result<_>>()?;
        if *edim == dim {
            cells.push(conn);
        } else if *edim + 1 == dim && *phys != 0 {
            groups.entry(*phys).or_default().push(conn);
        }
    }
    let face_groups = groups
        .into_iter()
        .map(|(tag, faces)| FaceGroup {
            name: names.get(&tag).cloned().unwrap_or_else(|| format!("physical_{tag}")),
            faces,
        })
        .collect();
    Ok(RawMesh {
        dim,
        nodes,
        elements: cells,
        face_groups,
    })
}

pub fn read_gmsh(path: &Path) -> Result<RawMesh> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gmsh(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}:{location}", path.display()),
            message,
        },
        other => other,
    })
}

/// Serialize a raw mesh. Face groups get physical tags `1..=n` in order and
/// the cells the tag `n + 1` named `domain`.
pub fn format_gmsh(mesh: &RawMesh) -> String {
    let mut s = String::new();
    let d = mesh.dim;
    s.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
    let n_groups = mesh.face_groups.len();
    let _ = writeln!(s, "$PhysicalNames\n{}", n_groups + 1);
    for (i, g) in mesh.face_groups.iter().enumerate() {
        let _ = writeln!(s, "{} {} \"{}\"", d - 1, i + 1, g.name);
    }
    let _ = writeln!(s, "{} {} \"domain\"", d, n_groups + 1);
    s.push_str("$EndPhysicalNames\n");
    let _ = writeln!(s, "$Nodes\n{}", mesh.nodes.len());
    for (i, p) in mesh.nodes.iter().enumerate() {
        let _ = writeln!(s, "{} {:?} {:?} {:?}", i + 1, p.x, p.y, p.z);
    }
    s.push_str("$EndNodes\n");
    let total: usize = mesh.face_groups.iter().map(|g| g.faces.len()).sum::<usize>() + mesh.elements.len();
    let _ = writeln!(s, "$Elements\n{total}");
    let face_code = if d == 2 { 1 } else { 2 };
    let cell_code = if d == 2 { 2 } else { 4 };
    let mut id = 1;
    for (gi, g) in mesh.face_groups.iter().enumerate() {
        for f in &g.faces {
            let _ = write!(s, "{id} {face_code} 2 {} {}", gi + 1, gi + 1);
            for n in f {
                let _ = write!(s, " {}", n + 1);
            }
            s.push('\n');
            id += 1;
        }
    }
    for e in &mesh.elements {
        let _ = write!(s, "{id} {cell_code} 2 {} {}", n_groups + 1, n_groups + 1);
        for n in e {
            let _ = write!(s, " {}", n + 1);
        }
        s.push('\n');
        id += 1;
    }
    s.push_str("$EndElements\n");
    s
}

pub fn write_gmsh(path: &Path, mesh: &RawMesh) -> Result<()> {
    std::fs::write(path, format_gmsh(mesh)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::structured::{rectangle, Polyline};

    #[test]
    fn round_trip_of_structured_mesh() {
        let raw = rectangle(
            [0.0, 0.0],
            [2.0, 1.0],
            [4, 2],
            &[Polyline {
                name: "f".into(),
                points: vec![[0.5, 0.5], [1.5, 0.5]],
            }],
        )
        .unwrap();
        let back = parse_gmsh(&format_gmsh(&raw)).unwrap();
        assert_eq!(back, raw);
    }

    #[test]
    fn quadrilateral_cells_are_read_and_left_to_validation() {
        let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n$EndNodes\n$Elements\n1\n1 3 2 1 1 1 2 3 4\n$EndElements\n";
        let raw = parse_gmsh(text).unwrap();
        assert_eq!(raw.elements[0].len(), 4);
        assert!(matches!(
            crate::mesh::build_mesh(&raw, &[]),
            Err(Error::UnsupportedElement { .. })
        ));
    }

    #[test]
    fn malformed_node_reports_line() {
        let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 zero 0\n$EndNodes\n";
        match parse_gmsh(text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "line 6"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unnamed_physical_groups_get_default_names() {
        let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n$Elements\n2\n1 1 2 7 1 1 2\n2 2 2 1 1 1 2 3\n$EndElements\n";
        let raw = parse_gmsh(text).unwrap();
        assert_eq!(raw.face_groups[0].name, "physical_7");
    }
}
