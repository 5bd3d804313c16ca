use super::ModelError;

/// Shannon entropy, in bits, of the per-user message counts of a cluster.
///
/// `H = -Σ (n_u / n) log2(n_u / n)`. Users with a zero count contribute
/// nothing.
pub fn user_diversity<I>(counts: I) -> Result<f64, ModelError>
where
    I: IntoIterator<Item = u64>,
    I::IntoIter: Clone,
{
    let counts = counts.into_iter();
    let total: u64 = counts.clone().sum();
    if total == 0 {
        return Err(ModelError::NoUsers);
    }
    if counts.clone().filter(|&c| c > 0).count() == 1 {
        return Ok(0.0);
    }
    let n = total as f64;
    // H = log2(n) - (1/n) Σ n_u log2(n_u); exact log2(m) for m users with
    // one message each.
    let weighted: f64 = counts
        .filter(|&c| c > 0)
        .map(|c| {
            let c = c as f64;
            c * libm::log2(c)
        })
        .sum();
    let h = libm::log2(n) - weighted / n;
    Ok(if h < 0.0 { 0.0 } else { h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn direct(counts: &[u64]) -> f64 {
        let n: u64 = counts.iter().sum();
        -counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n as f64;
                p * p.ln() / core::f64::consts::LN_2
            })
            .sum::<f64>()
    }

    #[test]
    fn single_user_is_zero() {
        assert_eq!(user_diversity([7]).unwrap(), 0.0);
    }

    #[test]
    fn thirty_two_uniform_users_is_five_bits() {
        assert_eq!(user_diversity(vec![1u64; 32]).unwrap(), 5.0);
    }

    #[test]
    fn mixed_counts() {
        let h = user_diversity([2, 1, 1]).unwrap();
        assert!((h - 1.5).abs() < 1e-12, "h = {h}");
    }

    #[test]
    fn empty_is_an_error() {
        assert_eq!(user_diversity(Vec::<u64>::new()), Err(ModelError::NoUsers));
        assert_eq!(user_diversity([0, 0]), Err(ModelError::NoUsers));
    }

    proptest! {
        #[test]
        fn matches_direct_summation(counts in prop::collection::vec(1u64..=20, 1..=10)) {
            let h = user_diversity(counts.iter().copied()).unwrap();
            prop_assert!((h - direct(&counts)).abs() < 1e-9);
            let bound = libm::log2(counts.len() as f64);
            prop_assert!(h >= 0.0 && h <= bound + 1e-12);
            let uniform = counts.iter().all(|&c| c == counts[0]);
            prop_assert_eq!(uniform, (h - bound).abs() < 1e-9);
        }
    }
}
