//! Affine rank of a point set and the origin-in-hull test.

/// Greedy pivoted selection of affinely independent points.
///
/// Returns the indices of the selected points, anchor first. A candidate is
/// accepted when the component of `x^j - x^anchor` orthogonal to the span of
/// the already accepted differences exceeds `tol` times the diameter of the
/// set; at every step the candidate with the largest such component wins.
pub fn independent_subset(points: &[Vec<f64>], tol: f64) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let dim = points[0].len();
    let anchor = 0usize;
    let scale = diameter(points).max(f64::MIN_POSITIVE);
    let mut chosen = vec![anchor];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut remaining: Vec<usize> = (1..points.len()).collect();
    while basis.len() < dim {
        let mut best: Option<(usize, f64, Vec<f64>)> = None;
        for (pos, &j) in remaining.iter().enumerate() {
            let mut r: Vec<f64> = points[j].iter().zip(&points[anchor]).map(|(a, b)| a - b).collect();
            for q in &basis {
                let proj: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
                r.iter_mut().zip(q).for_each(|(a, b)| *a -= proj * b);
            }
            let norm = r.iter().map(|a| a * a).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|b| norm > b.1) {
                best = Some((pos, norm, r));
            }
        }
        match best {
            Some((pos, norm, r)) if norm > tol * scale => {
                chosen.push(remaining.remove(pos));
                basis.push(r.into_iter().map(|a| a / norm).collect());
            }
            _ => break,
        }
    }
    chosen
}

/// Dimension of the affine hull of `points`.
pub fn affine_rank(points: &[Vec<f64>], tol: f64) -> usize {
    independent_subset(points, tol).len().saturating_sub(1)
}

fn diameter(points: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let dist = p.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            d = d.max(dist);
        }
    }
    d
}

/// L1 distance from the origin to the convex hull of `points`, solved as the
/// linear program
///
/// ```text
/// min Σ (p_l + q_l) + M a   s.t.  Σ_j t_j x^j + p - q = 0,  Σ_j t_j + a = 1
/// ```
///
/// with every variable nonnegative. `M` exceeds any attainable distance, so
/// the artificial `a` is zero at the optimum.
pub fn hull_distance_l1(points: &[Vec<f64>]) -> f64 {
    let npts = points.len();
    let dim = points[0].len();
    let big = 1.0 + points
        .iter()
        .map(|p| p.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    // Columns: t_0..t_{npts-1}, p_0..p_{dim-1}, q_0..q_{dim-1}, a.
    let ncol = npts + 2 * dim + 1;
    let nrow = dim + 1;
    let mut a = vec![vec![0.0; ncol]; nrow];
    let mut rhs = vec![0.0; nrow];
    for l in 0..dim {
        for j in 0..npts {
            a[l][j] = points[j][l];
        }
        a[l][npts + l] = 1.0;
        a[l][npts + dim + l] = -1.0;
    }
    for j in 0..npts {
        a[dim][j] = 1.0;
    }
    a[dim][ncol - 1] = 1.0;
    rhs[dim] = 1.0;
    let mut cost = vec![0.0; ncol];
    for l in 0..dim {
        cost[npts + l] = 1.0;
        cost[npts + dim + l] = 1.0;
    }
    cost[ncol - 1] = big;
    let basis: Vec<usize> = (0..dim).map(|l| npts + l).chain(std::iter::once(ncol - 1)).collect();
    simplex_min(a, rhs, &cost, basis)
}

/// Dense tableau simplex with Bland's rule. `basis` must index identity
/// columns of `a` and `rhs` must be nonnegative.
fn simplex_min(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>, cost: &[f64], mut basis: Vec<usize>) -> f64 {
    const EPS: f64 = 1e-13;
    let nrow = a.len();
    let ncol = cost.len();
    for _ in 0..10_000 {
        // Reduced costs c_j - c_B B^{-1} A_j; the tableau already holds B^{-1} A.
        let entering = (0..ncol).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z: f64 = (0..nrow).map(|r| cost[basis[r]] * a[r][j]).sum();
            cost[j] - z < -EPS
        });
        let Some(col) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..nrow {
            if a[r][col] > EPS {
                let ratio = rhs[r] / a[r][col];
                let better = match leave {
                    None => true,
                    Some((lr, best)) => ratio < best - EPS || (ratio <= best + EPS && basis[r] < basis[lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // Unbounded cannot happen: the objective is bounded below by zero.
        let Some((row, _)) = leave else { break };
        let piv = a[row][col];
        a[row].iter_mut().for_each(|v| *v /= piv);
        rhs[row] /= piv;
        for r in 0..nrow {
            if r != row {
                let factor = a[r][col];
                if factor != 0.0 {
                    for j in 0..ncol {
                        a[r][j] -= factor * a[row][j];
                    }
                    rhs[r] -= factor * rhs[row];
                }
            }
        }
        basis[row] = col;
    }
    (0..nrow).map(|r| cost[basis[r]] * rhs[r]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_triangle_and_segment() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(affine_rank(&tri, 1e-10), 2);
        let seg = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(affine_rank(&seg, 1e-10), 1);
        let pt = vec![vec![3.0, 1.0], vec![3.0, 1.0]];
        assert_eq!(affine_rank(&pt, 1e-10), 0);
    }

    #[test]
    fn pivoting_skips_duplicates() {
        let pts = vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let sel = independent_subset(&pts, 1e-10);
        assert_eq!(sel.len(), 3);
        assert_eq!(sel[0], 0);
        assert!(sel.contains(&4));
    }

    #[test]
    fn hull_distance() {
        let outside = vec![vec![1.0, 1.0], vec![2.0, 1.0], vec![1.0, 3.0]];
        assert!((hull_distance_l1(&outside) - 2.0).abs() < 1e-12);
        let inside = vec![vec![-1.0, -1.0], vec![2.0, -1.0], vec![-1.0, 2.0]];
        assert!(hull_distance_l1(&inside) < 1e-12);
        let boundary = vec![vec![-1.0], vec![0.0], vec![2.0]];
        assert!(hull_distance_l1(&boundary) < 1e-12);
        let far = vec![vec![10.0], vec![20.0]];
        assert!((hull_distance_l1(&far) - 10.0).abs() < 1e-12);
    }
}
