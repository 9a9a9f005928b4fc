use alloc::vec::Vec;
use itertools::Itertools;

/// Both slices sorted ascending.
pub(crate) fn is_subset_sorted<T: Ord>(small: &[T], big: &[T]) -> bool {
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            match y.cmp(x) {
                core::cmp::Ordering::Less => continue,
                core::cmp::Ordering::Equal => continue 'outer,
                core::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// `k`-subsets of a sorted slice, lexicographic.
pub(crate) fn k_subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    items.iter().cloned().combinations(k).collect()
}

/// Every subset of a sorted slice; each subset stays sorted.
pub(crate) fn all_subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    items.iter().cloned().powerset().collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub(crate) fn strictly_increasing<T: Ord>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}
