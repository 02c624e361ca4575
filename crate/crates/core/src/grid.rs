//! Sampling grids.

use alloc::vec::Vec;

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// `n` logarithmically spaced points on `[lo, hi]`; both bounds must be positive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (libm::log(lo), libm::log(hi));
    linspace(a, b, n)
        .into_iter()
        .enumerate()
        .map(|(i, u)| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                libm::exp(u)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = logspace(0.05, 20.0, 60);
        assert_eq!(g.len(), 60);
        assert_eq!((g[0], g[59]), (0.05, 20.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let l = linspace(-5.0, 5.0, 101);
        assert_eq!((l[0], l[50], l[100]), (-5.0, 0.0, 5.0));
    }
}
