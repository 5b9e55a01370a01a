//! Relative errors against a reference solution and observed orders.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::io::{num, Table};
use crate::mesh::{Mesh, Point};
use crate::post::FaceRecord;

/// Relative error `(Σ m |x − x_ref|²)^½ / (Σ m |x_ref|²)^½`.
/// Returns 0 when both the difference and the reference vanish.
pub fn relative_error(values: &[Point], reference: &[Point], weights: &[f64]) -> Result<f64> {
    if values.len() != reference.len() || weights.len() != reference.len() {
        return Err(Error::Contract("error norm operands differ in length".into()));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for ((x, r), m) in values.iter().zip(reference).zip(weights) {
        num += m * (x - r).norm_squared();
        den += m * r.norm_squared();
    }
    if num == 0.0 {
        return Ok(0.0);
    }
    if den == 0.0 {
        return Err(Error::InvalidParameter("reference solution vanishes".into()));
    }
    Ok((num / den).sqrt())
}

/// `log2(e_h / e_{h/2})` for consecutive entries.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Least-squares slope of `log e` against `log h`.
pub fn fitted_order(h: &[f64], errors: &[f64]) -> f64 {
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Barycentric coordinates of `p` in the simplex `v`, in the least-squares
/// sense when the simplex has lower dimension than the space.
fn barycentric(v: &[Point], p: &Point, dim: usize) -> Option<Vec<f64>> {
    let k = v.len() - 1;
    let a = DMatrix::from_fn(dim, k, |i, j| v[j + 1][i] - v[0][i]);
    let b = DVector::from_fn(dim, |i, _| p[i] - v[0][i]);
    let ata = a.transpose() * &a;
    let x = ata.lu().solve(&(a.transpose() * b))?;
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0 - x.sum());
    out.extend(x.iter());
    Some(out)
}

/// Containment score: the smallest barycentric coordinate, minus the
/// relative distance to the simplex's affine hull.
fn score(v: &[Point], p: &Point, dim: usize, size: f64) -> f64 {
    let Some(l) = barycentric(v, p, dim) else {
        return f64::NEG_INFINITY;
    };
    let proj = v.iter().zip(&l).fold(Point::zeros(), |s, (x, w)| s + x * *w);
    let off = (proj - p).norm() / size;
    l.iter().copied().fold(f64::INFINITY, f64::min) - off
}

/// Uniform bucket grid over simplices for point location.
struct Locator {
    dim: usize,
    lo: Point,
    size: f64,
    n: [usize; 3],
    buckets: Vec<Vec<usize>>,
    simplices: Vec<Vec<Point>>,
}

impl Locator {
    fn new(dim: usize, simplices: Vec<Vec<Point>>) -> Self {
        let mut lo = Point::repeat(f64::INFINITY);
        let mut hi = Point::repeat(f64::NEG_INFINITY);
        for s in &simplices {
            for x in s {
                lo = lo.inf(x);
                hi = hi.sup(x);
            }
        }
        for a in dim..3 {
            lo[a] = 0.0;
            hi[a] = 0.0;
        }
        let extent = (hi - lo).max().max(f64::MIN_POSITIVE);
        let per_axis = ((simplices.len() as f64).powf(1.0 / dim as f64).ceil() as usize).max(1);
        let size = extent / per_axis as f64;
        let mut n = [1usize; 3];
        for a in 0..dim {
            n[a] = (((hi[a] - lo[a]) / size).ceil() as usize).max(1);
        }
        let mut loc = Locator {
            dim,
            lo,
            size,
            n,
            buckets: vec![Vec::new(); n[0] * n[1] * n[2]],
            simplices: Vec::new(),
        };
        for (i, s) in simplices.iter().enumerate() {
            let (mut a, mut b) = (Point::repeat(f64::INFINITY), Point::repeat(f64::NEG_INFINITY));
            for x in s {
                a = a.inf(x);
                b = b.sup(x);
            }
            let (ia, ib) = (loc.index(&a), loc.index(&b));
            for z in ia[2]..=ib[2] {
                for y in ia[1]..=ib[1] {
                    for x in ia[0]..=ib[0] {
                        loc.buckets[(z * n[1] + y) * n[0] + x].push(i);
                    }
                }
            }
        }
        loc.simplices = simplices;
        loc
    }

    fn index(&self, p: &Point) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in 0..self.dim {
            let i = ((p[a] - self.lo[a]) / self.size).floor();
            out[a] = (i.max(0.0) as usize).min(self.n[a] - 1);
        }
        out
    }

    /// Simplex that best contains `p`; falls back to a full scan when no
    /// bucket candidate contains it.
    fn locate(&self, p: &Point) -> usize {
        let i = self.index(p);
        let bucket = &self.buckets[(i[2] * self.n[1] + i[1]) * self.n[0] + i[0]];
        let best = |ids: &mut dyn Iterator<Item = usize>| {
            ids.map(|s| (s, score(&self.simplices[s], p, self.dim, self.size)))
                .fold((usize::MAX, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b })
        };
        let (s, sc) = best(&mut bucket.iter().copied());
        if sc >= -1e-9 {
            return s;
        }
        best(&mut (0..self.simplices.len())).0
    }
}

/// Solution snapshot needed for comparisons.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub mesh: Mesh,
    pub displacement: Vec<Point>,
    pub faces: Vec<FaceRecord>,
}

impl Snapshot {
    /// Characteristic mesh size: the largest cell diameter.
    pub fn mesh_size(&self) -> f64 {
        self.mesh
            .cells
            .iter()
            .map(|c| {
                let mut d: f64 = 0.0;
                for &a in &c.nodes {
                    for &b in &c.nodes {
                        d = d.max((self.mesh.nodes[a] - self.mesh.nodes[b]).norm());
                    }
                }
                d
            })
            .fold(0.0, f64::max)
    }
}

/// Errors of one coarse solution against the reference.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub displacement: f64,
    /// Per fracture: (name, traction error, jump error).
    pub fractures: Vec<(String, f64, f64)>,
}

/// Compare `coarse` to `reference` by evaluating the piecewise-constant
/// coarse fields at the reference cell centers and fracture face centroids.
pub fn compare(coarse: &Snapshot, reference: &Snapshot) -> Result<Comparison> {
    let (cm, rm) = (&coarse.mesh, &reference.mesh);
    if cm.dim != rm.dim || cm.fractures.len() != rm.fractures.len() {
        return Err(Error::Contract("compared meshes differ in dimension or fractures".into()));
    }
    let dim = cm.dim;
    let cells: Vec<Vec<Point>> = cm
        .cells
        .iter()
        .map(|c| c.nodes.iter().map(|&n| cm.nodes[n]).collect())
        .collect();
    let loc = Locator::new(dim, cells);
    let mapped: Vec<Point> = rm
        .cells
        .iter()
        .map(|c| coarse.displacement[loc.locate(&c.center)])
        .collect();
    let vols: Vec<f64> = rm.cells.iter().map(|c| c.volume).collect();
    let displacement = relative_error(&mapped, &reference.displacement, &vols)?;

    let mut fractures = Vec::new();
    for (fi, fr) in rm.fractures.iter().enumerate() {
        let coarse_faces: Vec<&FaceRecord> = coarse.faces.iter().filter(|r| r.fracture == fi).collect();
        let ref_faces: Vec<&FaceRecord> = reference.faces.iter().filter(|r| r.fracture == fi).collect();
        if coarse_faces.is_empty() || ref_faces.is_empty() {
            return Err(Error::Contract(format!("fracture '{}' has no face records", fr.name)));
        }
        let simplices: Vec<Vec<Point>> = coarse_faces
            .iter()
            .map(|r| cm.faces[r.face].nodes.iter().map(|&n| cm.nodes[n]).collect())
            .collect();
        let floc = Locator::new(dim, simplices);
        let (mut lam, mut lam_ref, mut jump, mut jump_ref, mut w) = (vec![], vec![], vec![], vec![], vec![]);
        for r in &ref_faces {
            let c = coarse_faces[floc.locate(&r.centroid)];
            lam.push(c.lambda);
            jump.push(c.jump);
            lam_ref.push(r.lambda);
            jump_ref.push(r.jump);
            w.push(r.area);
        }
        fractures.push((
            fr.name.clone(),
            relative_error(&lam, &lam_ref, &w)?,
            relative_error(&jump, &jump_ref, &w)?,
        ));
    }
    Ok(Comparison {
        displacement,
        fractures,
    })
}

/// Errors of a refinement sequence against its finest member.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStudy {
    pub mesh_sizes: Vec<f64>,
    /// One comparison per non-reference level, coarse to fine.
    pub comparisons: Vec<Comparison>,
}

impl ConvergenceStudy {
    /// `snapshots` are ordered coarse to fine; the last one is the reference.
    pub fn new(snapshots: &[Snapshot]) -> Result<Self> {
        let Some((reference, levels)) = snapshots.split_last() else {
            return Err(Error::Contract("convergence study needs at least one snapshot".into()));
        };
        Ok(ConvergenceStudy {
            mesh_sizes: levels.iter().map(Snapshot::mesh_size).collect(),
            comparisons: levels
                .iter()
                .map(|s| compare(s, reference))
                .collect::<Result<_>>()?,
        })
    }

    /// Error series keyed by variable name, e.g. `u`, `lambda:fracture`,
    /// `jump:fracture`.
    pub fn series(&self) -> Vec<(String, Vec<f64>)> {
        let mut out = vec![(
            "u".to_string(),
            self.comparisons.iter().map(|c| c.displacement).collect(),
        )];
        if let Some(first) = self.comparisons.first() {
            for (i, (name, _, _)) in first.fractures.iter().enumerate() {
                out.push((format!("lambda:{name}"), self.comparisons.iter().map(|c| c.fractures[i].1).collect()));
                out.push((format!("jump:{name}"), self.comparisons.iter().map(|c| c.fractures[i].2).collect()));
            }
        }
        out
    }

    /// Least-squares order of every series.
    pub fn fitted_orders(&self) -> Vec<(String, f64)> {
        self.series()
            .into_iter()
            .map(|(name, e)| {
                let o = fitted_order(&self.mesh_sizes, &e);
                (name, o)
            })
            .collect()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["variable", "level", "h", "error", "order"]);
        for (name, e) in self.series() {
            let orders = observed_orders(&e);
            for (l, err) in e.iter().enumerate() {
                t.push(vec![
                    name.clone(),
                    l.to_string(),
                    num(self.mesh_sizes[l]),
                    num(*err),
                    if l == 0 { String::new() } else { num(orders[l - 1]) },
                ]);
            }
        }
        t
    }
}
