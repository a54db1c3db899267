//! Centralized numerical tolerances.
//!
//! Every threshold used by the library lives in this one record so that
//! property suites and the CLI can scale all of them with a single knob
//! (`Tolerances::scaled`). No module defines ad-hoc magic bands.

/// Tolerance configuration shared by all operations.
///
/// The defaults are the contract values; `scaled` multiplies every band
/// uniformly for stress testing.
#[derive(Clone, Debug)]
pub struct Tolerances {
    /// Most negative eigenvalue accepted for a quantum state matrix.
    pub cone_quantum: f64,
    /// Most negative entry accepted for a classical probability vector.
    pub cone_classical: f64,
    /// Allowed excess of |x|, |y| over 1 for a gbit state.
    pub cone_gbit: f64,
    /// Per-coordinate band for an observation-test summing to the unit effect.
    pub test_sum: f64,
    /// Clamp band around 0 and 1 for state/effect pairings.
    pub pair_clamp: f64,
    /// Rank-one residual (second eigenvalue) band for purity checks.
    pub purity: f64,
    /// Allowed deviation of (u|rho) from 1 for normalized states.
    pub normalization: f64,
    /// Band for delta_ij conditions in distinguishability certificates.
    pub distinguish: f64,
    /// Max-norm bound on rho minus its reconstructed diagonalization.
    pub reconstruction: f64,
    /// Band for a spectrum summing to 1.
    pub spectrum_sum: f64,
    /// Allowed non-monotonicity between consecutive spectrum entries.
    pub spectrum_sorted: f64,
    /// Slack on partial-sum comparisons in the majorization predicate.
    pub majorization: f64,
    /// Row/column-sum band for doubly stochastic checks.
    pub doubly_stochastic: f64,
    /// Entries above this participate in the matching during extraction.
    pub birkhoff_support: f64,
    /// Extraction stops once the residual max entry drops below this.
    pub birkhoff_residual: f64,
    /// Round-trip band for reversible channels and trace preservation.
    pub channel_roundtrip: f64,
    /// Band for the invariant state being fixed by group generators.
    pub invariant_fixed: f64,
    /// p_star at least 1 minus this band terminates a peel as pure.
    pub peel_unit: f64,
    /// Band for RaRe channel weights summing to 1.
    pub rare_weight_sum: f64,
    /// Max-norm bound on R(sigma) minus rho for synthesized channels.
    pub synthesis: f64,
    /// Elementwise band for two sorted spectra counting as equal.
    pub spectra_equal: f64,
    /// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
    pub jacobi_off: f64,
    /// Max |M - M^T| for a matrix to count as symmetric.
    pub symmetry: f64,
    /// Singular values below this are dropped by the pseudo-inverse.
    pub pinv_cutoff: f64,
    /// Pivot threshold for numerical rank computation.
    pub rank: f64,
    /// Max-norm bound on the steering effect reproducing its component.
    pub steering: f64,
    /// Most negative eigenvalue accepted when checking p*sigma <= rho.
    pub psd_order: f64,
    /// Elementwise band for a reversible channel mapping one maximal set onto another.
    pub strong_symmetry: f64,
    /// Band around 1/d for the invariant-state spectrum check.
    pub invariant_spectrum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cone_quantum: 1e-10,
            cone_classical: 1e-12,
            cone_gbit: 1e-12,
            test_sum: 1e-9,
            pair_clamp: 1e-10,
            purity: 1e-8,
            normalization: 1e-9,
            distinguish: 1e-8,
            reconstruction: 1e-8,
            spectrum_sum: 1e-9,
            spectrum_sorted: 1e-12,
            majorization: 1e-9,
            doubly_stochastic: 1e-9,
            birkhoff_support: 1e-10,
            birkhoff_residual: 1e-9,
            channel_roundtrip: 1e-10,
            invariant_fixed: 1e-10,
            peel_unit: 1e-12,
            rare_weight_sum: 1e-12,
            synthesis: 1e-8,
            spectra_equal: 1e-9,
            jacobi_off: 1e-12,
            symmetry: 1e-12,
            pinv_cutoff: 1e-10,
            rank: 1e-10,
            steering: 1e-8,
            psd_order: 1e-10,
            strong_symmetry: 1e-8,
            invariant_spectrum: 1e-10,
        }
    }
}

impl Tolerances {
    /// Every band multiplied by `factor`. Used by the CLI's tolerance scale.
    pub fn scaled(factor: f64) -> Self {
        let base = Tolerances::default();
        Tolerances {
            cone_quantum: base.cone_quantum * factor,
            cone_classical: base.cone_classical * factor,
            cone_gbit: base.cone_gbit * factor,
            test_sum: base.test_sum * factor,
            pair_clamp: base.pair_clamp * factor,
            purity: base.purity * factor,
            normalization: base.normalization * factor,
            distinguish: base.distinguish * factor,
            reconstruction: base.reconstruction * factor,
            spectrum_sum: base.spectrum_sum * factor,
            spectrum_sorted: base.spectrum_sorted * factor,
            majorization: base.majorization * factor,
            doubly_stochastic: base.doubly_stochastic * factor,
            birkhoff_support: base.birkhoff_support * factor,
            birkhoff_residual: base.birkhoff_residual * factor,
            channel_roundtrip: base.channel_roundtrip * factor,
            invariant_fixed: base.invariant_fixed * factor,
            peel_unit: base.peel_unit * factor,
            rare_weight_sum: base.rare_weight_sum * factor,
            synthesis: base.synthesis * factor,
            spectra_equal: base.spectra_equal * factor,
            jacobi_off: base.jacobi_off * factor,
            symmetry: base.symmetry * factor,
            pinv_cutoff: base.pinv_cutoff * factor,
            rank: base.rank * factor,
            steering: base.steering * factor,
            psd_order: base.psd_order * factor,
            strong_symmetry: base.strong_symmetry * factor,
            invariant_spectrum: base.invariant_spectrum * factor,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_multiplies_every_band() {
        let t = Tolerances::scaled(10.0);
        let base = Tolerances::default();
        assert_eq!(t.pair_clamp, base.pair_clamp * 10.0);
        assert_eq!(t.test_sum, base.test_sum * 10.0);
        assert_eq!(t.purity, base.purity * 10.0);
        assert_eq!(t.invariant_spectrum, base.invariant_spectrum * 10.0);
    }

    #[test]
    fn defaults_are_positive() {
        let t = Tolerances::default();
        for v in [
            t.cone_quantum,
            t.cone_classical,
            t.cone_gbit,
            t.test_sum,
            t.pair_clamp,
            t.purity,
            t.normalization,
            t.distinguish,
            t.reconstruction,
            t.spectrum_sum,
            t.spectrum_sorted,
            t.majorization,
            t.doubly_stochastic,
            t.birkhoff_support,
            t.birkhoff_residual,
            t.channel_roundtrip,
            t.invariant_fixed,
            t.peel_unit,
            t.rare_weight_sum,
            t.synthesis,
            t.spectra_equal,
            t.jacobi_off,
            t.symmetry,
            t.pinv_cutoff,
            t.rank,
            t.steering,
            t.psd_order,
            t.strong_symmetry,
            t.invariant_spectrum,
        ] {
            assert!(v > 0.0);
        }
    }
}
