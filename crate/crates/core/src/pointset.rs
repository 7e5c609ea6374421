//! Multiset comparisons of complex point clouds.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_complex::Complex64;

fn total_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Exact multiset equality (IEEE equality after sorting).
pub fn multiset_eq_exact(a: &[Complex64], b: &[Complex64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(total_cmp);
    b.sort_by(total_cmp);
    a == b
}

/// Pairs every point of `a` with a distinct point of `b` no farther than
/// `tol`. Returns the largest pairing distance, or `None` if the sizes
/// differ or some point is left without a partner.
///
/// Matching is greedy over a hash grid of cell size `tol`, taking the
/// nearest unused candidate; clusters tighter than `tol` are assumed to be
/// interchangeable.
pub fn match_within(a: &[Complex64], b: &[Complex64], tol: f64) -> Option<f64> {
    assert!(tol > 0.0);
    if a.len() != b.len() {
        return None;
    }
    let key = |z: &Complex64| ((z.re / tol).floor() as i64, (z.im / tol).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, z) in b.iter().enumerate() {
        buckets.entry(key(z)).or_default().push(i);
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in a {
        let (kx, ky) = key(z);
        let mut best: Option<(f64, usize)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(cands) = buckets.get(&(kx + dx, ky + dy)) else {
                    continue;
                };
                for &j in cands {
                    if used[j] {
                        continue;
                    }
                    let d = (b[j] - z).norm();
                    if d <= tol && best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, j));
                    }
                }
            }
        }
        let (d, j) = best?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}
