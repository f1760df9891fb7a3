use std::sync::atomic::{AtomicU64, Ordering};

/// Default comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

static TOL_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Global comparison tolerance τ used for snapping points, dropping
/// negligible weights and validating invariants.
pub fn tol() -> f64 {
    f64::from_bits(TOL_BITS.load(Ordering::Relaxed))
}

/// Overrides τ for the rest of the process. Intended to be called once at
/// start-up (the CLI does so from `ONECURRENT_TOL`).
pub fn set_tol(value: f64) {
    assert!(value.is_finite() && value > 0.0, "tolerance must be positive");
    TOL_BITS.store(value.to_bits(), Ordering::Relaxed);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bits_match() {
        assert_eq!(f64::from_bits(0x3E11_2E0B_E826_D695), DEFAULT_TOL);
        assert_eq!(tol(), DEFAULT_TOL);
    }
}
