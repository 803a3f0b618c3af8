use std::f64::consts::PI;

use super::{SystemParams, C64};

/// Lorentzian spectral density `J(ω) = (γ/2π) q² / ((ω - ω_c)² + q²)`.
pub fn spectral_density(params: &SystemParams, omega: f64) -> f64 {
    let q = params.q;
    let d = omega - params.omega_c;
    params.gamma() / (2.0 * PI) * q * q / (d * d + q * q)
}

/// Bath correlation function `K(τ) = (γq/2) exp(-q|τ| - i ω_c τ)`.
pub fn correlation_kernel(params: &SystemParams, tau: f64) -> C64 {
    let amplitude = 0.5 * params.gamma() * params.q;
    C64::new(-params.q * tau.abs(), -params.omega_c * tau).exp() * amplitude
}

/// Weak-coupling population under a constant detuning `omega_max`:
/// `exp(-2p² q t / |q + i ω_max|²)`.
pub fn weak_coupling_population(params: &SystemParams, omega_max: f64, t: f64) -> f64 {
    let q = params.q;
    let denom = q * q + omega_max * omega_max;
    (-2.0 * params.p * params.p * q * t / denom).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_peak_and_half_width() {
        let params = SystemParams::with_center(1.3, 0.7, 4.0).unwrap();
        let peak = params.gamma() / (2.0 * PI);
        assert!((spectral_density(&params, 4.0) - peak).abs() < 1e-15);
        assert!((spectral_density(&params, 4.7) - peak / 2.0).abs() < 1e-15);
        assert!((spectral_density(&params, 3.3) - peak / 2.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_values() {
        let params = SystemParams::new(5f64.sqrt(), 1.0).unwrap();
        assert!((correlation_kernel(&params, 0.0) - C64::new(5.0, 0.0)).norm() < 1e-14);
        assert!(
            (correlation_kernel(&params, 1.0) - C64::new(5.0 / 1f64.exp(), 0.0)).norm() < 1e-14
        );

        let shifted = SystemParams::with_center(0.8, 1.5, 2.0).unwrap();
        for tau in [0.1, 0.9, 3.0] {
            let k = correlation_kernel(&shifted, tau);
            assert!((correlation_kernel(&shifted, -tau) - k.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn weak_coupling_reference_values() {
        let params = SystemParams::new(0.25, 1.0).unwrap();
        assert!((weak_coupling_population(&params, 0.0, 8.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(weak_coupling_population(&params, 2.0, 0.0), 1.0);
        let mut last = 1.0;
        for k in 1..50 {
            let v = weak_coupling_population(&params, 2.0, k as f64);
            assert!(v < last && v > 0.0);
            last = v;
        }
    }
}
