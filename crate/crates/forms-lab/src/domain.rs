//! Compact bodies K, their dilations T·K, and the slicing rotation R_v.
//!
//! Every domain is compact and equals the closure of its interior by
//! construction: balls need positive radius, boxes nondegenerate intervals,
//! polytopes a bounded feasible set with nonempty interior. Polytope
//! boundedness is checked once at construction so later operations cannot
//! fail on an unbounded body.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orthogonality/determinant tolerance for rotations and unit vectors.
pub const ROTATION_TOLERANCE: f64 = 1e-9;

/// One half-space `a · x <= b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Ball {
        radius: f64,
    },
    AxisBox {
        intervals: Vec<[f64; 2]>,
    },
    Polytope {
        halfspaces: Vec<HalfSpace>,
        vertices: Vec<Vec<f64>>,
    },
}

/// A compact body in R^n: ball, axis-aligned box, or bounded polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    n: usize,
    shape: Shape,
}

impl Domain {
    /// Closed Euclidean ball of the given radius centered at the origin.
    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("domain dimension must be positive"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::input("ball radius must be positive and finite"));
        }
        Ok(Domain {
            n,
            shape: Shape::Ball { radius },
        })
    }

    /// Axis box given by per-axis closed intervals `[lo, hi]` with `lo < hi`.
    pub fn axis_box(intervals: Vec<[f64; 2]>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::input("axis box needs at least one interval"));
        }
        for [lo, hi] in &intervals {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::input(format!(
                    "degenerate or unbounded interval [{lo}, {hi}]"
                )));
            }
        }
        Ok(Domain {
            n: intervals.len(),
            shape: Shape::AxisBox { intervals },
        })
    }

    /// Unit cube `[0,1]^n`.
    pub fn unit_cube(n: usize) -> Self {
        Domain::axis_box(vec![[0.0, 1.0]; n]).expect("valid by construction")
    }

    /// Bounded polytope from half-spaces `a · x <= b`.
    ///
    /// Construction enumerates the basic feasible vertices, verifies the
    /// recession cone is trivial (boundedness) and that the vertex centroid
    /// is strictly interior (full dimension), failing fast otherwise.
    pub fn polytope(halfspaces: Vec<HalfSpace>) -> Result<Self> {
        let n = halfspaces
            .first()
            .ok_or_else(|| Error::input("polytope needs at least one half-space"))?
            .a
            .len();
        if n == 0 {
            return Err(Error::input("domain dimension must be positive"));
        }
        for h in &halfspaces {
            if h.a.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: h.a.len(),
                });
            }
            if h.a.iter().all(|c| *c == 0.0) {
                return Err(Error::input("half-space with zero normal"));
            }
        }
        if halfspaces.len() < n + 1 {
            return Err(Error::input("too few half-spaces to bound a polytope"));
        }

        let vertices = feasible_vertices(&halfspaces, n)?;
        if vertices.is_empty() {
            return Err(Error::input("polytope is empty"));
        }
        if !recession_cone_is_trivial(&halfspaces, n) {
            return Err(Error::input("polytope is unbounded"));
        }
        // full-dimensionality: the vertex centroid must be strictly feasible
        let mut centroid = vec![0.0; n];
        for v in &vertices {
            for (c, vi) in centroid.iter_mut().zip(v) {
                *c += vi;
            }
        }
        for c in centroid.iter_mut() {
            *c /= vertices.len() as f64;
        }
        let scale = vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(1.0f64, |m, x| m.max(x.abs()));
        for h in &halfspaces {
            let slack = h.b - dot(&h.a, &centroid);
            if slack <= 1e-12 * scale.max(h.b.abs()) {
                return Err(Error::input("polytope has empty interior"));
            }
        }
        Ok(Domain {
            n,
            shape: Shape::Polytope {
                halfspaces,
                vertices,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Closed-set membership.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.contains_unchecked(x))
    }

    #[inline]
    pub fn contains_unchecked(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Ball { radius } => x.iter().map(|v| v * v).sum::<f64>() <= radius * radius,
            Shape::AxisBox { intervals } => x
                .iter()
                .zip(intervals)
                .all(|(v, [lo, hi])| *lo <= *v && *v <= *hi),
            Shape::Polytope { halfspaces, .. } => halfspaces.iter().all(|h| dot(&h.a, x) <= h.b),
        }
    }

    /// The dilated body `T·K`.
    pub fn dilate(&self, t: f64) -> Result<Domain> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::input("dilation factor must be positive"));
        }
        let shape = match &self.shape {
            Shape::Ball { radius } => Shape::Ball { radius: radius * t },
            Shape::AxisBox { intervals } => Shape::AxisBox {
                intervals: intervals.iter().map(|[lo, hi]| [lo * t, hi * t]).collect(),
            },
            Shape::Polytope {
                halfspaces,
                vertices,
            } => Shape::Polytope {
                halfspaces: halfspaces
                    .iter()
                    .map(|h| HalfSpace {
                        a: h.a.clone(),
                        b: h.b * t,
                    })
                    .collect(),
                vertices: vertices
                    .iter()
                    .map(|v| v.iter().map(|x| x * t).collect())
                    .collect(),
            },
        };
        Ok(Domain { n: self.n, shape })
    }

    /// Smallest axis box containing the domain.
    pub fn bounding_box(&self) -> Vec<[f64; 2]> {
        match &self.shape {
            Shape::Ball { radius } => vec![[-radius, *radius]; self.n],
            Shape::AxisBox { intervals } => intervals.clone(),
            Shape::Polytope { vertices, .. } => {
                let mut bb = vec![[f64::INFINITY, f64::NEG_INFINITY]; self.n];
                for v in vertices {
                    for (b, x) in bb.iter_mut().zip(v) {
                        b[0] = b[0].min(*x);
                        b[1] = b[1].max(*x);
                    }
                }
                bb
            }
        }
    }

    /// Support interval `[min v·x, max v·x]` over the domain.
    pub fn support_interval(&self, v: &[f64]) -> Result<[f64; 2]> {
        if v.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(match &self.shape {
            Shape::Ball { radius } => {
                let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                [-radius * norm, radius * norm]
            }
            Shape::AxisBox { intervals } => {
                let mut lo = 0.0;
                let mut hi = 0.0;
                for (c, [a, b]) in v.iter().zip(intervals) {
                    if *c >= 0.0 {
                        lo += c * a;
                        hi += c * b;
                    } else {
                        lo += c * b;
                        hi += c * a;
                    }
                }
                [lo, hi]
            }
            Shape::Polytope { vertices, .. } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for vert in vertices {
                    let s = dot(v, vert);
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
                [lo, hi]
            }
        })
    }

    /// Parses the JSON descriptor `{"ball": r}`, `{"box": [[lo,hi],...]}` or
    /// `{"polytope": [{"a": [...], "b": ...}, ...]}`. Balls take the
    /// dimension from the caller.
    pub fn from_json(json: &str, n_for_ball: usize) -> Result<Domain> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Descriptor {
            #[serde(default)]
            ball: Option<f64>,
            #[serde(default, rename = "box")]
            axis_box: Option<Vec<[f64; 2]>>,
            #[serde(default)]
            polytope: Option<Vec<HalfSpace>>,
        }
        let d: Descriptor = serde_json::from_str(json)?;
        match (d.ball, d.axis_box, d.polytope) {
            (Some(r), None, None) => Domain::ball(n_for_ball, r),
            (None, Some(b), None) => Domain::axis_box(b),
            (None, None, Some(h)) => Domain::polytope(h),
            _ => Err(Error::input(
                "domain JSON must have exactly one of `ball`, `box`, `polytope`",
            )),
        }
    }

    pub fn to_json(&self) -> String {
        match &self.shape {
            Shape::Ball { radius } => format!("{{\"ball\": {radius}}}"),
            Shape::AxisBox { intervals } => {
                format!("{{\"box\": {}}}", serde_json::to_string(intervals).unwrap())
            }
            Shape::Polytope { halfspaces, .. } => format!(
                "{{\"polytope\": {}}}",
                serde_json::to_string(halfspaces).unwrap()
            ),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Basic feasible solutions: intersections of n half-space boundaries that
/// satisfy every constraint. Desk-scale polytopes keep the combinatorics
/// small.
fn feasible_vertices(halfspaces: &[HalfSpace], n: usize) -> Result<Vec<Vec<f64>>> {
    let m = halfspaces.len();
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut index = vec![0usize; n];
    let mut combos: Vec<Vec<usize>> = Vec::new();
    gen_combinations(m, n, 0, &mut index, 0, &mut combos);
    let scale = halfspaces
        .iter()
        .flat_map(|h| h.a.iter().chain(std::iter::once(&h.b)))
        .fold(1.0f64, |acc, x| acc.max(x.abs()));
    for combo in combos {
        let a = DMatrix::from_fn(n, n, |i, j| halfspaces[combo[i]].a[j]);
        let b = DVector::from_fn(n, |i, _| halfspaces[combo[i]].b);
        let lu = a.lu();
        if let Some(x) = lu.solve(&b) {
            let xv: Vec<f64> = x.iter().copied().collect();
            if xv.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let feasible = halfspaces
                .iter()
                .all(|h| dot(&h.a, &xv) <= h.b + 1e-9 * scale);
            if feasible {
                vertices.push(xv);
            }
        }
    }
    Ok(vertices)
}

fn gen_combinations(
    m: usize,
    k: usize,
    depth: usize,
    current: &mut Vec<usize>,
    start: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == k {
        out.push(current.clone());
        return;
    }
    for i in start..m {
        current[depth] = i;
        gen_combinations(m, k, depth + 1, current, i + 1, out);
    }
}

/// The recession cone {d : A d <= 0} is trivial iff the bounded polyhedron
/// {A d <= 0, -1 <= d_i <= 1} has no vertex away from the origin; the max of
/// each |d_i| over that polyhedron is attained at a vertex.
fn recession_cone_is_trivial(halfspaces: &[HalfSpace], n: usize) -> bool {
    let mut cone: Vec<HalfSpace> = halfspaces
        .iter()
        .map(|h| HalfSpace {
            a: h.a.clone(),
            b: 0.0,
        })
        .collect();
    for i in 0..n {
        let mut a = vec![0.0; n];
        a[i] = 1.0;
        cone.push(HalfSpace {
            a: a.clone(),
            b: 1.0,
        });
        for c in a.iter_mut() {
            *c = -*c;
        }
        cone.push(HalfSpace { a, b: 1.0 });
    }
    match feasible_vertices(&cone, n) {
        Ok(verts) => verts.iter().all(|v| v.iter().all(|x| x.abs() <= 1e-7)),
        Err(_) => false,
    }
}

/// An n x n rotation (orthogonal, determinant 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    matrix: DMatrix<f64>,
}

impl Rotation {
    pub fn identity(n: usize) -> Self {
        Rotation {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.matrix * DVector::from_column_slice(x);
        v.iter().copied().collect()
    }

    #[inline]
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let mut acc = 0.0;
            for (j, xj) in x.iter().enumerate().take(n) {
                acc += self.matrix[(i, j)] * xj;
            }
            *o = acc;
        }
    }
}

/// The rotation taking `e_n` to the unit vector `v`, acting in the plane
/// spanned by `e_n` and `v` and fixing its orthogonal complement; the
/// identity when `v = e_n`.
///
/// For `v = -e_n` the plane degenerates and no rotation fixes the whole
/// complement of the line; the half-turn in the `(e_1, e_n)` plane is used.
pub fn rotation_to(v: &[f64]) -> Result<Rotation> {
    let n = v.len();
    if n == 0 {
        return Err(Error::input("empty direction vector"));
    }
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > ROTATION_TOLERANCE {
        return Err(Error::input(format!(
            "direction must be a unit vector, norm is {norm}"
        )));
    }
    let c = v[n - 1]; // cos of the angle between v and e_n
                      // component of v orthogonal to e_n (Gram-Schmidt step)
    let mut w: Vec<f64> = v.to_vec();
    w[n - 1] = 0.0;
    let s = w.iter().map(|x| x * x).sum::<f64>().sqrt(); // sin
    if s < ROTATION_TOLERANCE {
        if c > 0.0 {
            return Ok(Rotation::identity(n));
        }
        if n == 1 {
            return Err(Error::input("no rotation maps e_1 to -e_1 in dimension 1"));
        }
        let mut m = DMatrix::identity(n, n);
        m[(0, 0)] = -1.0;
        m[(n - 1, n - 1)] = -1.0;
        return Ok(Rotation { matrix: m });
    }
    for x in w.iter_mut() {
        *x /= s;
    }
    // R = I + (c-1)(e_n e_n^T + w w^T) + s (w e_n^T - e_n w^T)
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            let en_i = if i == n - 1 { 1.0 } else { 0.0 };
            let en_j = if j == n - 1 { 1.0 } else { 0.0 };
            m[(i, j)] += (c - 1.0) * (en_i * en_j + w[i] * w[j]) + s * (w[i] * en_j - en_i * w[j]);
        }
    }
    Ok(Rotation { matrix: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ball_membership() {
        let b = Domain::ball(2, 1.0).unwrap();
        assert!(b.contains(&[0.0, 0.0]).unwrap());
        assert!(b.contains(&[1.0, 0.0]).unwrap());
        assert!(!b.contains(&[1.0001, 0.0]).unwrap());
    }

    #[test]
    fn box_boundary_included() {
        let k = Domain::unit_cube(2);
        assert!(k.contains(&[1.0, 1.0]).unwrap());
        assert!(!k.contains(&[1.0, 1.0 + 1e-12]).unwrap());
    }

    #[test]
    fn dilation() {
        let b = Domain::ball(2, 1.0).unwrap();
        let b10 = b.dilate(10.0).unwrap();
        assert!(b10.contains(&[10.0, 0.0]).unwrap());
        assert!(!b10.contains(&[10.1, 0.0]).unwrap());
        let k = Domain::unit_cube(3);
        let kt = k.dilate(2.5).unwrap();
        assert_eq!(kt.bounding_box(), vec![[0.0, 2.5]; 3]);
    }

    #[test]
    fn dilation_membership_identity() {
        let k = Domain::axis_box(vec![[-1.0, 2.0], [0.5, 3.0]]).unwrap();
        let t = 3.0;
        let kt = k.dilate(t).unwrap();
        for x in [[0.0, 1.0], [-1.0, 0.5], [2.0, 3.0], [2.1, 1.0]] {
            let tx = [x[0] * t, x[1] * t];
            assert_eq!(k.contains(&x).unwrap(), kt.contains(&tx).unwrap());
        }
    }

    #[test]
    fn dilate_rejects_nonpositive() {
        let b = Domain::ball(2, 1.0).unwrap();
        assert!(b.dilate(0.0).is_err());
        assert!(b.dilate(-1.0).is_err());
    }

    #[test]
    fn bounding_boxes() {
        let b = Domain::ball(2, 1.0).unwrap();
        assert_eq!(b.bounding_box(), vec![[-1.0, 1.0], [-1.0, 1.0]]);
        let k = Domain::axis_box(vec![[0.0, 2.0], [-1.0, 1.0]]).unwrap();
        assert_eq!(k.bounding_box(), vec![[0.0, 2.0], [-1.0, 1.0]]);
    }

    #[test]
    fn triangle_bounding_box_via_vertex_scan() {
        // conv{(0,0),(2,0),(0,3)} : x >= 0, y >= 0, 3x + 2y <= 6
        let tri = Domain::polytope(vec![
            HalfSpace {
                a: vec![-1.0, 0.0],
                b: 0.0,
            },
            HalfSpace {
                a: vec![0.0, -1.0],
                b: 0.0,
            },
            HalfSpace {
                a: vec![3.0, 2.0],
                b: 6.0,
            },
        ])
        .unwrap();
        let bb = tri.bounding_box();
        assert_relative_eq!(bb[0][0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(bb[0][1], 2.0, epsilon = 1e-9);
        assert_relative_eq!(bb[1][0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(bb[1][1], 3.0, epsilon = 1e-9);
    }

    #[test]
    fn unbounded_polytope_rejected() {
        // only x >= 0, y >= 0, x + ... no upper bound
        let res = Domain::polytope(vec![
            HalfSpace {
                a: vec![-1.0, 0.0],
                b: 0.0,
            },
            HalfSpace {
                a: vec![0.0, -1.0],
                b: 0.0,
            },
            HalfSpace {
                a: vec![-1.0, -1.0],
                b: 1.0,
            },
        ]);
        assert!(res.is_err());
    }

    #[test]
    fn flat_polytope_rejected() {
        // x <= 0 and -x <= 0 force x = 0: empty interior
        let res = Domain::polytope(vec![
            HalfSpace {
                a: vec![1.0, 0.0],
                b: 0.0,
            },
            HalfSpace {
                a: vec![-1.0, 0.0],
                b: 0.0,
            },
            HalfSpace {
                a: vec![0.0, 1.0],
                b: 1.0,
            },
            HalfSpace {
                a: vec![0.0, -1.0],
                b: 1.0,
            },
        ]);
        assert!(res.is_err());
    }

    #[test]
    fn support_intervals() {
        let b = Domain::ball(3, 2.0).unwrap();
        assert_eq!(b.support_interval(&[1.0, 0.0, 0.0]).unwrap(), [-2.0, 2.0]);
        let k = Domain::axis_box(vec![[0.0, 1.0], [0.0, 2.0]]).unwrap();
        assert_eq!(k.support_interval(&[1.0, 0.0]).unwrap(), [0.0, 1.0]);
        assert_eq!(k.support_interval(&[-1.0, 1.0]).unwrap(), [-1.0, 2.0]);
    }

    #[test]
    fn rotation_identity_for_en() {
        let r = rotation_to(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(r.matrix(), Rotation::identity(3).matrix());
    }

    #[test]
    fn rotation_sends_en_to_v() {
        let r = rotation_to(&[1.0, 0.0]).unwrap();
        let image = r.apply(&[0.0, 1.0]);
        assert_relative_eq!(image[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(image[1], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn rotation_orthogonal_unit_det() {
        let dirs = [
            vec![0.6, 0.8, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.36, 0.48, 0.8],
            vec![0.0, 0.0, -1.0],
        ];
        for v in dirs {
            let r = rotation_to(&v).unwrap();
            let m = r.matrix();
            let prod = m.transpose() * m;
            let id = DMatrix::<f64>::identity(3, 3);
            assert!((prod - id).abs().max() < 1e-9);
            assert_relative_eq!(m.determinant(), 1.0, epsilon = 1e-9);
            let image = r.apply(&[0.0, 0.0, 1.0]);
            for (a, b) in image.iter().zip(&v) {
                assert_relative_eq!(a, b, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn rotation_fixes_orthogonal_complement() {
        let v = [0.6, 0.0, 0.8];
        let r = rotation_to(&v).unwrap();
        // e_2 is orthogonal to both e_3 and v
        let image = r.apply(&[0.0, 1.0, 0.0]);
        assert_relative_eq!(image[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(image[1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(image[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rotation_rejects_non_unit() {
        assert!(rotation_to(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn domain_json_round_trip() {
        let b = Domain::ball(2, 1.5).unwrap();
        let parsed = Domain::from_json(&b.to_json(), 2).unwrap();
        assert_eq!(b, parsed);
        let k = Domain::axis_box(vec![[0.0, 1.0], [-0.5, 2.0]]).unwrap();
        let parsed = Domain::from_json(&k.to_json(), 0).unwrap();
        assert_eq!(k, parsed);
        let tri = Domain::polytope(vec![
            HalfSpace {
                a: vec![-1.0, 0.0],
                b: 0.0,
            },
            HalfSpace {
                a: vec![0.0, -1.0],
                b: 0.0,
            },
            HalfSpace {
                a: vec![3.0, 2.0],
                b: 6.0,
            },
        ])
        .unwrap();
        let parsed = Domain::from_json(&tri.to_json(), 0).unwrap();
        assert_eq!(tri, parsed);
    }
}
