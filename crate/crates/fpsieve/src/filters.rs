//! Pattern filters: the statistical-independence test for non-reducible
//! patterns and the same-frequency grouping optimization.

use crate::db::ItemId;
use crate::level::LevelContext;

/// Outcome of an independence check.
#[derive(Clone, Copy, Debug)]
pub struct FilterDecision {
    /// Whether the pattern deviates enough from independence to keep.
    pub keep: bool,
    /// Acceptance band width.
    pub epsilon: f64,
    /// `|f_pattern / (N·q) - 1|`.
    pub ratio_deviation: f64,
}

/// Tests whether a pattern's support is explainable by statistical
/// independence of its prefix and its last element.
///
/// With `q = (f_prefix/N)·(f_last/N)`, the support of an independent
/// combination is binomial with mean `N·q` and dispersion `N(q - q²)`, so
/// the relative deviation `|f_pattern/(Nq) - 1|` stays within
/// `ε = σ·√(1-q)/√(N·q)` for a σ-multiple of the root-mean-square. The
/// pattern is kept only when it falls outside that band.
///
/// `f_prefix` is the support of the pattern minus its last element (the
/// reference frequency one level up); `f_last` is the root frequency of the
/// last element; `n` is the root transaction count.
pub fn independence_check(
    f_pattern: u32,
    f_prefix: u32,
    f_last: u32,
    n: u32,
    sigma_multiplier: f64,
) -> FilterDecision {
    debug_assert!(n >= 1 && f_prefix >= 1 && f_last >= 1);
    debug_assert!(f_prefix <= n && f_last <= n);
    let n = f64::from(n);
    let q = (f64::from(f_prefix) / n) * (f64::from(f_last) / n);
    // q = 1 collapses the band to zero: keep anything that is not at the
    // exact independence point.
    let epsilon = sigma_multiplier * (1.0 - q).sqrt() / (n * q).sqrt();
    let ratio_deviation = (f64::from(f_pattern) / (n * q) - 1.0).abs();
    FilterDecision { keep: ratio_deviation > epsilon, epsilon, ratio_deviation }
}

/// Pulls out of a freshly built conditional database every element whose
/// frequency equals the reference frequency, i.e. elements present in every
/// conditional transaction. The caller attaches the returned group to the
/// reference's emitted pattern and to all deeper patterns under it; the
/// shorter patterns omitting group members are not emitted separately since
/// they follow from the grouped ones at the same support.
pub fn same_frequency_group(child: &mut LevelContext, ref_frequency: u32) -> Vec<ItemId> {
    debug_assert_eq!(child.txn_count(), ref_frequency);
    child.extract_elements_with_freq(ref_frequency)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::ListEncoding;
    use proptest::prelude::*;

    #[test]
    fn exact_independence_point_is_dropped() {
        let d = independence_check(100, 100, 100, 100, 3.0);
        assert!(!d.keep);
        assert_eq!(d.ratio_deviation, 0.0);
    }

    #[test]
    fn band_width_matches_direct_evaluation() {
        // q = 0.25, so ε = 3·√(0.75) / √(2500).
        let d = independence_check(2500, 5000, 5000, 10_000, 3.0);
        let expected = 3.0 * (1.0 - 0.25f64).sqrt() / (10_000.0 * 0.25f64).sqrt();
        assert!((d.epsilon - expected).abs() < 1e-12);
        assert!((d.epsilon - 0.051_961_524_227_066_32).abs() < 1e-12);
        assert_eq!(d.ratio_deviation, 0.0);
        assert!(!d.keep);
    }

    #[test]
    fn strong_deviation_is_kept() {
        let d = independence_check(4500, 5000, 5000, 10_000, 3.0);
        assert!((d.ratio_deviation - 0.8).abs() < 1e-12);
        assert!(d.keep);
    }

    #[test]
    fn saturated_marginals_keep_only_non_full_support() {
        // q = 1 → ε = 0.
        let drop = independence_check(50, 50, 50, 50, 3.0);
        assert!(!drop.keep);
        assert_eq!(drop.epsilon, 0.0);
        let keep = independence_check(49, 50, 50, 50, 3.0);
        assert!(keep.keep);
    }

    #[test]
    fn scaling_all_inputs_shrinks_the_band_by_sqrt_two() {
        let a = independence_check(2400, 5000, 5000, 10_000, 3.0);
        let b = independence_check(4800, 10_000, 10_000, 20_000, 3.0);
        assert!((a.ratio_deviation - b.ratio_deviation).abs() < 1e-12);
        assert!((b.epsilon * 2f64.sqrt() - a.epsilon).abs() < 1e-12);
    }

    fn sample_context() -> LevelContext {
        use crate::db::ItemId;
        // Lists: a = [1,3], b = [1,2,3], c = [2,3]; three conditional
        // transactions.
        LevelContext::from_parts(
            ListEncoding::Plain,
            vec![1, 3, 1, 2, 3, 2, 3],
            vec![ItemId(0), ItemId(1), ItemId(2)],
            vec![2, 3, 2],
            vec![0, 2, 5],
            vec![0, 2, 1],
            3,
            vec![ItemId(9)],
        )
        .unwrap()
    }

    #[test]
    fn grouping_extracts_saturated_elements() {
        let mut ctx = sample_context();
        let group = same_frequency_group(&mut ctx, 3);
        assert_eq!(group, vec![crate::db::ItemId(1)]);
        assert_eq!(ctx.element_count(), 2);
        assert_eq!(ctx.decoded_list(0), vec![1, 3]);
        assert_eq!(ctx.decoded_list(1), vec![2, 3]);
        ctx.validate().unwrap();
    }

    #[test]
    fn grouping_without_match_is_a_noop() {
        let mut ctx = sample_context();
        let before = ctx.decoded_list(1);
        let group = ctx.extract_elements_with_freq(99);
        assert!(group.is_empty());
        assert_eq!(ctx.element_count(), 3);
        assert_eq!(ctx.decoded_list(1), before);
    }

    #[test]
    fn grouping_can_empty_the_context() {
        use crate::db::ItemId;
        let mut ctx = LevelContext::from_parts(
            ListEncoding::Plain,
            vec![1, 2, 1, 2],
            vec![ItemId(0), ItemId(1)],
            vec![2, 2],
            vec![0, 2],
            vec![0, 1],
            2,
            vec![],
        )
        .unwrap();
        let group = same_frequency_group(&mut ctx, 2);
        assert_eq!(group, vec![ItemId(0), ItemId(1)]);
        assert_eq!(ctx.element_count(), 0);
    }

    proptest! {
        #[test]
        fn widening_sigma_never_flips_drop_to_keep(
            f_prefix in 1u32..200,
            f_last in 1u32..200,
            frac in 0.0f64..1.0,
            sigma in 0.1f64..5.0,
            extra in 0.0f64..5.0,
        ) {
            let n = 200;
            let max_pattern = f_prefix.min(f_last);
            let f_pattern = (frac * max_pattern as f64).round() as u32;
            let tight = independence_check(f_pattern, f_prefix, f_last, n, sigma);
            let loose = independence_check(f_pattern, f_prefix, f_last, n, sigma + extra);
            prop_assert!(!(loose.keep && !tight.keep));
        }
    }
}
