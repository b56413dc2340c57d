use super::SignedHypermatrix;
use crate::error::{Error, Result};

fn sign_classes(a: &SignedHypermatrix) -> [Vec<Vec<usize>>; 2] {
    let (h1, h2) = support_split(a);
    [h1, h2]
}

/// Largest `s` such that every two distinct equal-sign nonzero positions
/// differ by at least `s` in some coordinate. Equals the minimum Chebyshev
/// distance within a sign class, or `n` when no class has two members.
pub fn sparsity_index(a: &SignedHypermatrix) -> Result<usize> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = a.dims().iter().copied().max().unwrap_or(1);
    let mut best = n;
    for class in sign_classes(a) {
        for (i, p) in class.iter().enumerate() {
            for q in &class[i + 1..] {
                let cheb = p.iter().zip(q).map(|(&x, &y)| x.abs_diff(y)).max().unwrap_or(0);
                best = best.min(cheb);
            }
        }
    }
    Ok(best)
}

/// Stricter reading: one coordinate `j` must separate every equal-sign pair.
pub fn sparsity_index_strict(a: &SignedHypermatrix) -> Result<usize> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = a.dims().iter().copied().max().unwrap_or(1);
    let classes = sign_classes(a);
    let best = (0..a.ndim())
        .map(|j| {
            let mut worst = n;
            for class in &classes {
                for (i, p) in class.iter().enumerate() {
                    for q in &class[i + 1..] {
                        worst = worst.min(p[j].abs_diff(q[j]));
                    }
                }
            }
            worst
        })
        .max()
        .unwrap_or(n);
    Ok(best)
}

/// Positions carrying `+1` and `-1`.
pub fn support_split(a: &SignedHypermatrix) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (k, &v) in a.indices().zip(a.entries()) {
        match v {
            1 => plus.push(k),
            -1 => minus.push(k),
            _ => {}
        }
    }
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_entries(n: usize, entries: &[((usize, usize), i8)]) -> SignedHypermatrix {
        let mut a = SignedHypermatrix::cube(n, 2);
        for &((i, j), v) in entries {
            a.set(&[i, j], v).unwrap();
        }
        a
    }

    #[test]
    fn single_entry_is_n_sparse() {
        let a = from_entries(7, &[((3, 3), 1)]);
        assert_eq!(sparsity_index(&a).unwrap(), 7);
    }

    #[test]
    fn pair_uses_largest_coordinate_gap() {
        let a = from_entries(5, &[((0, 0), 1), ((3, 1), 1)]);
        assert_eq!(sparsity_index(&a).unwrap(), 3);
    }

    #[test]
    fn opposite_signs_do_not_interact() {
        let a = from_entries(5, &[((0, 0), 1), ((1, 0), -1)]);
        assert_eq!(sparsity_index(&a).unwrap(), 5);
    }

    #[test]
    fn zero_input_rejected() {
        assert!(matches!(
            sparsity_index(&SignedHypermatrix::cube(3, 2)),
            Err(Error::ZeroInput)
        ));
    }

    #[test]
    fn strict_form_is_no_larger() {
        let a = from_entries(6, &[((0, 0), 1), ((4, 1), 1), ((1, 5), 1)]);
        assert_eq!(sparsity_index(&a).unwrap(), 4);
        assert_eq!(sparsity_index_strict(&a).unwrap(), 1);
    }

    #[test]
    fn split_mixed_matrix() {
        let a = SignedHypermatrix::new(vec![3, 3], vec![1, 0, -1, 0, 0, 0, -1, 1, 0]).unwrap();
        let (h1, h2) = support_split(&a);
        assert_eq!(h1, vec![vec![0, 0], vec![2, 1]]);
        assert_eq!(h2, vec![vec![0, 2], vec![2, 0]]);
        let (e1, e2) = support_split(&SignedHypermatrix::cube(2, 2));
        assert!(e1.is_empty() && e2.is_empty());
    }

    proptest! {
        #[test]
        fn sparse_pairs_are_euclidean_far(cells in proptest::collection::vec(-1i8..=1, 36)) {
            let a = SignedHypermatrix::new(vec![6, 6], cells).unwrap();
            prop_assume!(!a.is_zero());
            let s = sparsity_index(&a).unwrap();
            let (h1, h2) = support_split(&a);
            for class in [h1, h2] {
                for (i, p) in class.iter().enumerate() {
                    for q in &class[i + 1..] {
                        let e: f64 = p.iter().zip(q).map(|(&x, &y)| (x as f64 - y as f64).powi(2)).sum();
                        prop_assert!(e.sqrt() >= s as f64);
                        prop_assert!(p.iter().zip(q).any(|(&x, &y)| x.abs_diff(y) >= s));
                    }
                }
            }
            prop_assert!(sparsity_index_strict(&a).unwrap() <= s);
        }
    }
}
