use crate::levelsets::ExtremalProfile;
use crate::polyspace::incomplete_beta_int;
use crate::{Error, Result};

/// `sigma(Delta_t(eta)) = (1 - t^{1/N})^d`, for the cap `{|zeta . conj(eta)|^{2N} > t}`.
pub fn cap_measure(n: usize, d: usize, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("cap level must lie in (0, 1), got {t}")));
    }
    Ok(ExtremalProfile { n, d }.mu(t))
}

/// Level `t = (1 - omega^{1/d})^N` of the cap of measure `omega`.
pub fn cap_level(n: usize, d: usize, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::Domain(format!("cap measure must lie in (0, 1), got {omega}")));
    }
    Ok(ExtremalProfile { n, d }.mu_inverse(omega))
}

/// Optimal concentration value `C_{N, Omega*}(zeta_1^N) = I_{omega^{1/d}}(d, N+1)`
/// for regions of measure `omega`.
pub fn extremal_concentration(n: usize, d: usize, omega: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::Domain(format!("measure must lie in [0, 1], got {omega}")));
    }
    Ok(incomplete_beta_int(omega.powf(1.0 / d as f64), d, n + 1))
}

fn check_omega(omega: f64, omega_tilde: f64) -> Result<()> {
    if !(omega > 0.0 && omega < omega_tilde && omega_tilde <= 1.0) {
        return Err(Error::Domain(format!(
            "need 0 < omega < omega_tilde <= 1, got omega = {omega}, omega_tilde = {omega_tilde}"
        )));
    }
    Ok(())
}

/// `N^d int_omega^{omega_tilde} (1 - s^{1/d})^N ds`.
pub fn stability_coefficient(omega: f64, n: usize, d: usize, omega_tilde: f64) -> Result<f64> {
    check_omega(omega, omega_tilde)?;
    let ext = ExtremalProfile { n, d };
    let integral = ext.integral_mu_inverse(omega_tilde) - ext.integral_mu_inverse(omega);
    Ok((n as f64).powi(d as i32) * integral)
}

/// `alpha(omega) = N^d omega^2 (1 - omega^{1/d})^{N-1} int_omega^{omega_tilde} (1 - s^{1/d})^N ds`.
pub fn alpha_coefficient(omega: f64, n: usize, d: usize, omega_tilde: f64) -> Result<f64> {
    let base = stability_coefficient(omega, n, d, omega_tilde)?;
    let r = 1.0 - omega.powf(1.0 / d as f64);
    Ok(base * omega * omega * r.powi(n as i32 - 1))
}
