//! Phase-one simplex feasibility solver and the point-in-hull oracle.
//!
//! This is deliberately minimal: dense tableau, Bland's pivoting rule for
//! cycle freedom, equality constraints with nonnegative variables. The
//! membership problems it serves have at most a few dozen rows and columns.

use crate::{Error, Result, TOL_LP};

/// Decide whether `{ x >= 0 : A x = b }` is nonempty, to tolerance `tol`
/// on the residual (the optimal phase-one objective).
pub fn feasible_eq(a: &[Vec<f64>], b: &[f64], tol: f64) -> bool {
    let m = a.len();
    assert_eq!(m, b.len());
    if m == 0 {
        return true;
    }
    let k = a[0].len();

    // Row equilibration keeps wildly scaled instances (sides like e^16)
    // from wrecking the pivot tolerances.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    for (row, &bi) in a.iter().zip(b) {
        assert_eq!(row.len(), k);
        let scale = row.iter().fold(bi.abs(), |s, v| s.max(v.abs()));
        let inv = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        let mut r: Vec<f64> = row.iter().map(|v| v * inv).collect();
        let mut bv = bi * inv;
        if bv < 0.0 {
            for v in &mut r {
                *v = -*v;
            }
            bv = -bv;
        }
        rows.push(r);
        rhs.push(bv);
    }

    // Tableau columns: k structural vars, m artificials, rhs.
    let ncols = k + m + 1;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![0.0; ncols];
        row[..k].copy_from_slice(&rows[i]);
        row[k + i] = 1.0;
        row[ncols - 1] = rhs[i];
        tab.push(row);
    }
    // Phase-one objective row: reduced costs after pricing out the
    // artificial basis; entry `ncols-1` holds minus the objective value.
    let mut obj = vec![0.0; ncols];
    for i in 0..m {
        for j in 0..k {
            obj[j] -= tab[i][j];
        }
        obj[ncols - 1] -= tab[i][ncols - 1];
    }
    let mut basis: Vec<usize> = (k..k + m).collect();

    let max_iters = 50 * (m + k).max(20) * (m + k).max(20);
    for _ in 0..max_iters {
        // Bland: entering column is the lowest index with negative reduced cost.
        let enter = match (0..k + m).find(|&j| obj[j] < -tol) {
            Some(j) => j,
            None => break,
        };
        // Ratio test; ties broken by the lowest basis variable index (Bland).
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let aij = tab[i][enter];
            if aij > tol {
                let ratio = tab[i][ncols - 1] / aij;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-15 || (ratio <= lr + 1e-15 && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let (pivot_row, _) = match leave {
            Some(p) => p,
            // Phase-one objective is bounded below by zero, so an unbounded
            // direction cannot occur; treat defensively as "no progress".
            None => break,
        };

        let pivot = tab[pivot_row][enter];
        for v in &mut tab[pivot_row] {
            *v /= pivot;
        }
        for i in 0..m {
            if i != pivot_row {
                let f = tab[i][enter];
                if f != 0.0 {
                    for j in 0..ncols {
                        tab[i][j] -= f * tab[pivot_row][j];
                    }
                }
            }
        }
        let f = obj[enter];
        if f != 0.0 {
            for j in 0..ncols {
                obj[j] -= f * tab[pivot_row][j];
            }
        }
        basis[pivot_row] = enter;
    }

    // Feasible iff the artificials were driven to (numerical) zero.
    -obj[ncols - 1] <= tol * (1.0 + m as f64)
}

/// Exact membership of `point` in the convex hull of `vertices`, decided by
/// a phase-one solve of `sum_i w_i v_i = x, sum_i w_i = 1, w >= 0`.
pub fn lp_point_in_hull(point: &[f64], vertices: &[Vec<f64>]) -> Result<bool> {
    if vertices.is_empty() {
        return Err(Error::Precondition("hull needs at least one vertex".into()));
    }
    let n = point.len();
    for v in vertices {
        if v.len() != n {
            return Err(Error::DimensionMismatch(n, v.len()));
        }
    }
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for i in 0..n {
        a.push(vertices.iter().map(|v| v[i]).collect());
    }
    a.push(vec![1.0; vertices.len()]);
    let mut b = point.to_vec();
    b.push(1.0);
    Ok(feasible_eq(&a, &b, TOL_LP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededStream;

    fn unit_square() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]
    }

    #[test]
    fn simplex_centroid_inside() {
        let verts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let centroid = vec![1.0 / 3.0, 1.0 / 3.0];
        assert!(lp_point_in_hull(&centroid, &verts).unwrap());
    }

    #[test]
    fn outside_unit_square() {
        assert!(!lp_point_in_hull(&[2.0, 0.0], &unit_square()).unwrap());
        assert!(lp_point_in_hull(&[1.0, 1.0], &unit_square()).unwrap()); // boundary vertex
        assert!(lp_point_in_hull(&[0.5, 0.5], &unit_square()).unwrap());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let verts = vec![vec![0.0, 0.0], vec![1.0, 0.0, 3.0]];
        assert!(lp_point_in_hull(&[0.1, 0.1], &verts).is_err());
    }

    #[test]
    fn barycenter_of_random_points_inside() {
        let mut s = SeededStream::new(9, "lp");
        for trial in 0..50 {
            let m = 3 + (trial % 5);
            let pts: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..3).map(|_| s.gaussian()).collect())
                .collect();
            let bary: Vec<f64> = (0..3)
                .map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / m as f64)
                .collect();
            assert!(lp_point_in_hull(&bary, &pts).unwrap());
        }
    }

    // Exhaustive half-plane oracle for 2D: x is in the hull iff no edge of
    // the hull separates it. Checked over all point pairs, O(m^2) but exact.
    fn halfplane_contains(x: &[f64], pts: &[Vec<f64>], tol: f64) -> bool {
        let m = pts.len();
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let (dx, dy) = (pts[j][0] - pts[i][0], pts[j][1] - pts[i][1]);
                // side of the directed line i -> j
                let side = |p: &[f64]| dx * (p[1] - pts[i][1]) - dy * (p[0] - pts[i][0]);
                if pts.iter().all(|p| side(p) <= tol) && side(x) > tol {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn agrees_with_halfplane_oracle_2d() {
        let mut s = SeededStream::new(23, "lp-oracle");
        for trial in 0..200 {
            let m = 3 + trial % 6;
            let pts: Vec<Vec<f64>> = (0..m)
                .map(|_| vec![s.gaussian(), s.gaussian()])
                .collect();
            let x = vec![1.5 * s.gaussian(), 1.5 * s.gaussian()];
            let lp = lp_point_in_hull(&x, &pts).unwrap();
            let hp = halfplane_contains(&x, &pts, 1e-9);
            // Skip razor-thin disagreements on the boundary itself.
            if lp != hp {
                let hp_loose = halfplane_contains(&x, &pts, 1e-6);
                let hp_tight = halfplane_contains(&x, &pts, -1e-6);
                assert!(hp_loose != hp_tight, "genuine disagreement at {x:?} {pts:?}");
            }
        }
    }

    #[test]
    fn degenerate_duplicate_vertices() {
        let verts = vec![vec![1.0, 1.0]; 4];
        assert!(lp_point_in_hull(&[1.0, 1.0], &verts).unwrap());
        assert!(!lp_point_in_hull(&[1.0, 1.1], &verts).unwrap());
    }
}
