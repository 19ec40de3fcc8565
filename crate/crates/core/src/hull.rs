//! Convex hulls of point sets on a fixed-sum affine slice of ℝⁿ, n ≤ 4.
//!
//! Points are mapped to an orthonormal chart of the sum-zero hyperplane
//! (Gram–Schmidt on e_i − e_{i+1}), reduced to their affine hull, and hulled
//! there: an interval for d = 1, gift wrapping for d = 2 and supporting-plane
//! enumeration for d = 3. Facet normals are reported back in ambient
//! coordinates with unit length, so facet slack is a Euclidean distance.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, Vector3};

use crate::error::{Error, Result};

/// Points closer than this are merged.
pub const MERGE_TOL: f64 = 1e-10;
/// Affine-hull rank cutoff (relative to the point-cloud spread).
const RANK_TOL: f64 = 1e-9;

/// The halfspace `normal · x ≤ offset` (unit normal).
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

#[derive(Debug, Clone)]
pub struct Polytope {
    ambient: usize,
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Halfspace>,
    /// Vertex indices on each facet, in boundary order for d ≥ 2.
    facet_vertices: Vec<Vec<usize>>,
    /// Affine-hull equations `normal · x = offset` (unit normals).
    equalities: Vec<Halfspace>,
    chart: DMatrix<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Orthonormal basis (columns) of {x : Σx = 0} from Gram–Schmidt on e_i − e_{i+1}.
pub fn sum_zero_chart(n: usize) -> DMatrix<f64> {
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v[i + 1] = -1.0;
        for q in &cols {
            let p = q.dot(&v);
            v -= q * p;
        }
        let norm = v.norm();
        cols.push(v / norm);
    }
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull vertices (indices into `pts`) by gift wrapping;
/// collinear boundary points are skipped.
fn gift_wrap(pts: &[[f64; 2]], tol: f64) -> Vec<usize> {
    let m = pts.len();
    if m < 3 {
        return (0..m).collect();
    }
    let start = (0..m)
        .min_by(|&i, &j| {
            pts[i][0]
                .partial_cmp(&pts[j][0])
                .unwrap()
                .then(pts[i][1].partial_cmp(&pts[j][1]).unwrap())
        })
        .expect("non-empty");
    let mut hull = vec![start];
    let mut current = start;
    for _ in 0..m {
        let mut next = if current == 0 { 1 } else { 0 };
        for k in 0..m {
            if k == current || k == next {
                continue;
            }
            let turn = cross2(&pts[current], &pts[next], &pts[k]);
            let farther = dist(&pts[current], &pts[k]) > dist(&pts[current], &pts[next]);
            // k lies clockwise of current→next, or on the same ray but farther.
            if turn < -tol || (turn.abs() <= tol && farther) {
                next = k;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        current = next;
    }
    hull
}

/// Convex hull of `points`, all with the same coordinate sum.
pub fn convex_hull(points: &[Vec<f64>]) -> Result<Polytope> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidParameter("convex hull of an empty set".into()))?;
    let n = first.len();
    if n == 0 || points.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidParameter("points must share one positive dimension".into()));
    }
    if n > 4 {
        return Err(Error::InvalidParameter(format!("hulls need n ≤ 4, got {n}")));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let sum: f64 = first.iter().sum();
    if let Some(p) = points.iter().find(|p| (p.iter().sum::<f64>() - sum).abs() > 1e-9) {
        return Err(Error::InvalidParameter(format!(
            "points do not share a coordinate sum ({} vs {sum})",
            p.iter().sum::<f64>()
        )));
    }

    let mut unique: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if unique.iter().all(|q| dist(p, q) > MERGE_TOL) {
            unique.push(p.clone());
        }
    }
    let m = unique.len();
    let centroid: Vec<f64> = (0..n)
        .map(|i| unique.iter().map(|p| p[i]).sum::<f64>() / m as f64)
        .collect();
    let chart = sum_zero_chart(n);
    let centered = DMatrix::from_fn(n, m, |i, j| unique[j][i] - centroid[i]);
    let y = chart.transpose() * &centered; // (n−1) × m

    let spread = centered.abs().max().max(1e-300);
    let (basis, dim) = if y.nrows() == 0 || m == 1 {
        (DMatrix::zeros(y.nrows(), 0), 0)
    } else {
        let svd = y.clone().svd(true, false);
        let u = svd.u.expect("left singular vectors");
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| svd.singular_values[k] > RANK_TOL * spread * (m as f64).sqrt())
            .collect();
        let cols: Vec<DVector<f64>> = keep.iter().map(|&k| u.column(k).into_owned()).collect();
        if cols.is_empty() {
            (DMatrix::zeros(y.nrows(), 0), 0)
        } else {
            (DMatrix::from_columns(&cols), cols.len())
        }
    };
    let z = basis.transpose() * &y; // d × m
    let to_ambient = |local: &[f64]| -> Vec<f64> {
        let v = &chart * (&basis * DVector::from_column_slice(local));
        v.iter().copied().collect()
    };
    let tol = MERGE_TOL * spread.max(1.0);

    // Facets in local coordinates as (normal, offset, point indices on facet).
    let mut local: Vec<(Vec<f64>, f64, Vec<usize>)> = Vec::new();
    let mut vertex_ids: Vec<usize> = Vec::new();
    match dim {
        0 => vertex_ids.push(0),
        1 => {
            let coord: Vec<f64> = (0..m).map(|j| z[(0, j)]).collect();
            let lo = (0..m).min_by(|&a, &b| coord[a].total_cmp(&coord[b])).unwrap();
            let hi = (0..m).max_by(|&a, &b| coord[a].total_cmp(&coord[b])).unwrap();
            vertex_ids = vec![lo.min(hi), lo.max(hi)];
            local.push((vec![1.0], coord[hi], vec![hi]));
            local.push((vec![-1.0], -coord[lo], vec![lo]));
        }
        2 => {
            let pts: Vec<[f64; 2]> = (0..m).map(|j| [z[(0, j)], z[(1, j)]]).collect();
            let ring = gift_wrap(&pts, tol);
            for (k, &a) in ring.iter().enumerate() {
                let b = ring[(k + 1) % ring.len()];
                let e = [pts[b][0] - pts[a][0], pts[b][1] - pts[a][1]];
                let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
                let normal = vec![e[1] / len, -e[0] / len];
                let offset = normal[0] * pts[a][0] + normal[1] * pts[a][1];
                local.push((normal, offset, vec![a, b]));
            }
            vertex_ids = ring;
        }
        _ => {
            let pts: Vec<Vector3<f64>> =
                (0..m).map(|j| Vector3::new(z[(0, j)], z[(1, j)], z[(2, j)])).collect();
            let mut planes: Vec<(Vector3<f64>, f64)> = Vec::new();
            for (i, j, k) in (0..m).tuple_combinations() {
                let nrm = (pts[j] - pts[i]).cross(&(pts[k] - pts[i]));
                if nrm.norm() <= tol {
                    continue;
                }
                let nrm = nrm.normalize();
                let off = nrm.dot(&pts[i]);
                let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    let s = nrm.dot(p);
                    (lo.min(s), hi.max(s))
                });
                for (cand, c_off, ok) in [(nrm, off, hi <= off + tol), (-nrm, -off, lo >= off - tol)] {
                    if ok
                        && planes
                            .iter()
                            .all(|(q, o)| (q - cand).norm() > 1e-8 || (o - c_off).abs() > 1e-8)
                    {
                        planes.push((cand, c_off));
                    }
                }
            }
            let mut on_vertex = vec![false; m];
            for (nrm, off) in planes {
                let on: Vec<usize> = (0..m).filter(|&j| (nrm.dot(&pts[j]) - off).abs() <= tol).collect();
                let a = if nrm.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
                let u = nrm.cross(&a).normalize();
                let v = nrm.cross(&u);
                let flat: Vec<[f64; 2]> = on.iter().map(|&j| [u.dot(&pts[j]), v.dot(&pts[j])]).collect();
                let ring: Vec<usize> = gift_wrap(&flat, tol).into_iter().map(|k| on[k]).collect();
                ring.iter().for_each(|&j| on_vertex[j] = true);
                local.push((vec![nrm.x, nrm.y, nrm.z], off, ring));
            }
            vertex_ids = (0..m).filter(|&j| on_vertex[j]).collect();
        }
    }

    let mut sorted_ids = vertex_ids.clone();
    sorted_ids.sort_unstable();
    let position = |j: usize| sorted_ids.binary_search(&j).expect("facet point is a vertex");
    let vertices: Vec<Vec<f64>> = sorted_ids.iter().map(|&j| unique[j].clone()).collect();
    let mut facets = Vec::with_capacity(local.len());
    let mut facet_vertices = Vec::with_capacity(local.len());
    for (normal, offset, on) in local {
        let amb = to_ambient(&normal);
        let offset = offset + dot(&amb, &centroid);
        facets.push(Halfspace { normal: amb, offset });
        facet_vertices.push(on.into_iter().map(position).collect());
    }

    let root_n = (n as f64).sqrt();
    let mut equalities = vec![Halfspace {
        normal: vec![1.0 / root_n; n],
        offset: sum / root_n,
    }];
    if dim < n - 1 {
        // Chart directions orthogonal to the affine hull.
        let mut span = basis.clone();
        let mut extra = Vec::new();
        for k in 0..n - 1 {
            let mut e = DVector::zeros(n - 1);
            e[k] = 1.0;
            let mut r = e.clone();
            for col in span.column_iter() {
                r -= col * col.dot(&e);
            }
            if r.norm() > 1e-6 {
                let r = r.normalize();
                let last = span.ncols();
                span = span.insert_column(last, 0.0);
                span.set_column(last, &r);
                extra.push(r);
            }
            if extra.len() == n - 1 - dim {
                break;
            }
        }
        for r in extra {
            let amb: Vec<f64> = (&chart * r).iter().copied().collect();
            let offset = dot(&amb, &centroid);
            equalities.push(Halfspace { normal: amb, offset });
        }
    }

    Ok(Polytope {
        ambient: n,
        dim,
        vertices,
        facets,
        facet_vertices,
        equalities,
        chart,
    })
}

impl Polytope {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn facet_vertices(&self) -> &[Vec<usize>] {
        &self.facet_vertices
    }

    pub fn equalities(&self) -> &[Halfspace] {
        &self.equalities
    }

    pub fn chart(&self) -> &DMatrix<f64> {
        &self.chart
    }

    /// Pairs of vertex indices joined by an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = match self.dim {
            0 => Vec::new(),
            1 => vec![(0, 1)],
            2 => {
                let ring = &self.facet_vertices;
                ring.iter().map(|f| (f[0].min(f[1]), f[0].max(f[1]))).collect()
            }
            _ => self
                .facet_vertices
                .iter()
                .flat_map(|ring| {
                    (0..ring.len()).map(move |k| {
                        let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
                        (a.min(b), a.max(b))
                    })
                })
                .collect(),
        };
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Largest violation of the equalities and facet inequalities at `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let eq = self
            .equalities
            .iter()
            .map(|h| h.slack(x).abs())
            .fold(0.0, f64::max);
        self.facets
            .iter()
            .map(|h| -h.slack(x))
            .fold(eq, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.ambient && self.violation(x) <= tol
    }

    /// Euclidean distance from `x` to the polytope.
    pub fn distance(&self, x: &[f64]) -> f64 {
        distance_to_hull(&self.vertices, x)
    }
}

/// Euclidean distance from `x` to conv(`points`), by enumerating affinely
/// independent subsets of size ≤ 4 and projecting onto each.
pub fn distance_to_hull(points: &[Vec<f64>], x: &[f64]) -> f64 {
    let mut best = points.iter().map(|p| dist(p, x)).fold(f64::INFINITY, f64::min);
    for size in 2..=points.len().min(4) {
        for subset in (0..points.len()).combinations(size) {
            let base = &points[subset[0]];
            let n = x.len();
            let a = DMatrix::from_fn(n, size - 1, |i, k| points[subset[k + 1]][i] - base[i]);
            let rhs = DVector::from_fn(n, |i, _| x[i] - base[i]);
            let gram = a.transpose() * &a;
            let Some(w) = gram.clone().lu().solve(&(a.transpose() * &rhs)) else {
                continue;
            };
            if gram.determinant().abs() < 1e-14 {
                continue;
            }
            let w0 = 1.0 - w.sum();
            if w0 < -1e-12 || w.iter().any(|&v| v < -1e-12) {
                continue;
            }
            let residual = (&a * &w - &rhs).norm();
            best = best.min(residual);
        }
    }
    best
}
