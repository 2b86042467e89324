//! Coding-gain measurement between two BER curves.

use crate::HarnessError;

/// Eb/N0 at which a curve reaches `target_ber`, by linear interpolation of
/// `log10(BER)` between the first pair of adjacent points that brackets it.
pub fn ebn0_at(curve: &[(f64, f64)], target_ber: f64) -> Result<f64, HarnessError> {
    if !(target_ber > 0.0 && target_ber < 1.0) {
        return Err(HarnessError::Gain(format!("target BER {target_ber} is not in (0, 1)")));
    }
    let mut points: Vec<(f64, f64)> = curve.iter().copied().filter(|&(_, ber)| ber > 0.0).collect();
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite Eb/N0"));
    let target = target_ber.log10();
    for pair in points.windows(2) {
        let (x0, y0) = (pair[0].0, pair[0].1.log10());
        let (x1, y1) = (pair[1].0, pair[1].1.log10());
        if (y0 >= target && target >= y1) || (y0 <= target && target <= y1) {
            if y0 == y1 {
                return Ok(x0);
            }
            return Ok(x0 + (target - y0) * (x1 - x0) / (y1 - y0));
        }
    }
    Err(HarnessError::Gain(format!(
        "target BER {target_ber:e} is outside the range of the curve"
    )))
}

/// Gain of `curve_b` over `curve_a` in dB at `target_ber`: positive when
/// `curve_b` reaches the target at a lower Eb/N0.
pub fn measure_gain(curve_a: &[(f64, f64)], curve_b: &[(f64, f64)], target_ber: f64) -> Result<f64, HarnessError> {
    Ok(ebn0_at(curve_a, target_ber)? - ebn0_at(curve_b, target_ber)?)
}
