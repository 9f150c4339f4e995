//! Temperature parametrisation, in units where `ħω = k_B = 1`.

/// `β̃ = coth(β/2)`; `β̃ → 1` at zero temperature.
pub fn beta_tilde_from_beta(beta: f64) -> f64 {
    1.0 / libm::tanh(beta / 2.0)
}

/// Inverse of [`beta_tilde_from_beta`] for `β̃ > 1`.
pub fn beta_from_beta_tilde(beta_tilde: f64) -> f64 {
    2.0 * libm::atanh(1.0 / beta_tilde)
}

/// `β̃` at temperature `T = 1/β`; increasing in `T`.
pub fn beta_tilde_from_temperature(temperature: f64) -> f64 {
    beta_tilde_from_beta(1.0 / temperature)
}

/// Rates `(v, u)` of the damping `v a` and pumping `u a†` noise operators
/// of a reservoir at `β̃`: `v² + u² = β̃` and `v² - u² = 1`.
pub fn noise_rates(beta_tilde: f64) -> (f64, f64) {
    (
        libm::sqrt((beta_tilde + 1.0) / 2.0),
        libm::sqrt(((beta_tilde - 1.0) / 2.0).max(0.0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for beta in [0.1, 1.0, 3.0, 10.0] {
            let b = beta_tilde_from_beta(beta);
            assert!(b > 1.0);
            assert!((beta_from_beta_tilde(b) - beta).abs() < 1e-12 * beta.max(1.0));
        }
    }

    #[test]
    fn increasing_in_temperature() {
        let mut prev = 1.0;
        for k in 1..200 {
            let b = beta_tilde_from_temperature(k as f64 * 0.05);
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn rates() {
        let (v, u) = noise_rates(1.0);
        assert_eq!((v, u), (1.0, 0.0));
        let (v, u) = noise_rates(2.2);
        assert!((v * v + u * u - 2.2).abs() < 1e-15 && (v * v - u * u - 1.0).abs() < 1e-15);
    }
}
