//! FFT-backed spectral calculus on the half-offset circle grid.
//!
//! Samples live at `theta_j = 2*pi*(j + 1/2)/n`, so the raw DFT picks up a
//! phase `exp(i*k*pi/n)` relative to the Fourier coefficients of the
//! trigonometric interpolant. All helpers here strip or restore that phase.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use std::f64::consts::PI;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_inplace(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let fft = if inverse {
            planner.plan_fft_inverse(buf.len())
        } else {
            planner.plan_fft_forward(buf.len())
        };
        fft.process(buf);
    });
}

/// Signed frequency for storage slot `i` of an `n`-point spectrum:
/// slots `0..n/2` hold `k = 0..n/2-1`, slots `n/2..n` hold `k = -n/2..-1`.
pub fn frequency(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Fourier coefficients `c_k` of the trigonometric interpolant through the
/// half-offset samples, stored in FFT slot order.
pub fn coefficients(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    fft_inplace(&mut buf, false);
    let scale = 1.0 / n as f64;
    for (i, c) in buf.iter_mut().enumerate() {
        let k = frequency(i, n) as f64;
        // remove the half-offset phase e^{ik*pi/n}
        let phase = Complex64::from_polar(scale, -k * PI / n as f64);
        *c *= phase;
    }
    buf
}

/// Samples at the half-offset nodes from coefficients in FFT slot order.
pub fn synthesize(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    for (i, c) in buf.iter_mut().enumerate() {
        let k = frequency(i, n) as f64;
        *c *= Complex64::from_polar(1.0, k * PI / n as f64);
    }
    fft_inplace(&mut buf, true);
    buf
}

/// Evaluate the trigonometric interpolant `sum_k c_k e^{ik theta}` at an
/// arbitrary angle. The Nyquist slot is treated as the cosine-only mode so
/// real sample sets interpolate to real values.
pub fn eval(coeffs: &[Complex64], theta: f64) -> Complex64 {
    let n = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &c) in coeffs.iter().enumerate() {
        let k = frequency(i, n);
        if k == -(n as i64) / 2 {
            // split the Nyquist mode symmetrically: e^{-in/2 t} -> cos(n/2 t)
            acc += c * (k as f64 * theta).cos();
        } else {
            acc += c * Complex64::from_polar(1.0, k as f64 * theta);
        }
    }
    acc
}

/// Fraction of spectral energy carried by the top quarter of frequencies.
pub fn tail_energy_fraction(coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len();
    let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let cut = (n / 4) as i64;
    let tail: f64 = coeffs
        .iter()
        .enumerate()
        .filter(|(i, _)| frequency(*i, n).abs() >= cut)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    tail / total
}
