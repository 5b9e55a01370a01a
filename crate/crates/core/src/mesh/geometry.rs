//! Small geometric helpers shared by the mesh and sub-grid construction.

use nalgebra::Vector3;

pub type Point = Vector3<f64>;

pub fn triangle_area(a: &Point, b: &Point, c: &Point) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

pub fn tetrahedron_volume(a: &Point, b: &Point, c: &Point, d: &Point) -> f64 {
    (b - a).dot(&(c - a).cross(&(d - a))).abs() / 6.0
}

/// Measure of a simplex given by `dim + 1` points.
pub fn simplex_measure(points: &[Point]) -> f64 {
    match points.len() {
        3 => triangle_area(&points[0], &points[1], &points[2]),
        4 => tetrahedron_volume(&points[0], &points[1], &points[2], &points[3]),
        n => panic!("simplex_measure: unsupported point count {n}"),
    }
}

pub fn centroid(points: &[Point]) -> Point {
    let mut c = Point::zeros();
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

/// Unit normal and measure of a mesh face (segment in 2d, triangle in 3d).
/// The orientation is arbitrary; callers orient it.
pub fn face_normal_and_measure(points: &[Point]) -> (Point, f64) {
    match points.len() {
        2 => {
            let t = points[1] - points[0];
            let len = t.norm();
            (Point::new(t.y, -t.x, 0.0) / len, len)
        }
        3 => {
            let n = (points[1] - points[0]).cross(&(points[2] - points[0]));
            let twice = n.norm();
            (n / twice, 0.5 * twice)
        }
        n => panic!("face_normal_and_measure: unsupported point count {n}"),
    }
}

/// Flip `n` so that its first component with magnitude above `tol` is positive.
pub fn canonical_orientation(n: &Point, tol: f64) -> Point {
    for i in 0..3 {
        if n[i].abs() > tol {
            return if n[i] > 0.0 { *n } else { -n };
        }
    }
    *n
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Deterministic orthonormal tangential basis for a unit normal: swap in the
/// axis of the smallest normal component, then Gram-Schmidt.
pub fn tangent_basis(n: &Point, dim: usize) -> Vec<Point> {
    if dim == 2 {
        return vec![Point::new(-n.y, n.x, 0.0)];
    }
    let mut axis = 0;
    for i in 1..3 {
        if n[i].abs() < n[axis].abs() {
            axis = i;
        }
    }
    let mut e = Point::zeros();
    e[axis] = 1.0;
    let t1 = (e - n * n.dot(&e)).normalize();
    let t2 = n.cross(&t1);
    vec![t1, t2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_basis_is_orthonormal() {
        for n in [
            Point::new(0.0, 0.0, 1.0),
            Point::new(1.0, 2.0, -3.0).normalize(),
            Point::new(-0.3, 0.1, 0.2).normalize(),
        ] {
            let t = tangent_basis(&n, 3);
            assert!(t[0].dot(&n).abs() < 1e-14);
            assert!(t[1].dot(&n).abs() < 1e-14);
            assert!(t[0].dot(&t[1]).abs() < 1e-14);
            assert!((t[0].norm() - 1.0).abs() < 1e-14);
            assert!((t[1].norm() - 1.0).abs() < 1e-14);
        }
        let t = tangent_basis(&Point::new(0.0, 1.0, 0.0), 2);
        assert_eq!(t[0], Point::new(-1.0, 0.0, 0.0));
    }

    #[test]
    fn canonical_orientation_flips_leading_negative() {
        let n = Point::new(0.0, -1.0, 0.0);
        assert_eq!(canonical_orientation(&n, 1e-12), Point::new(0.0, 1.0, 0.0));
    }
}
