use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, TflocError};
use crate::tfcore::grid::{roots_of_unity, GridFunction};
use crate::tfcore::signal::{check_dim, PhasePoint, Signal};

/// Time-frequency shift (pi(z)f)(t) = e^{2 pi i omega t / N} f(t - x mod N).
pub fn tf_shift(z: PhasePoint, f: &Signal) -> Signal {
    let n = f.n();
    let roots = roots_of_unity(n);
    let data = (0..n)
        .map(|t| roots[(z.omega * t) % n] * f.get((t + n - z.x % n) % n))
        .collect();
    Signal::new(data).expect("same dimension as input")
}

/// STFT: V_g f(x, omega) = sum_t f(t) conj(g(t-x)) e^{-2 pi i omega t / N}
///     = <f, pi(x, omega) g>.
pub fn stft(g: &Signal, f: &Signal) -> Result<GridFunction> {
    let n = f.n();
    check_dim(n, g.n())?;
    let roots = roots_of_unity(n);
    let mut out = GridFunction::zeros(n)?;
    for x in 0..n {
        for omega in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..n {
                // conj of e^{2 pi i omega t / N}
                acc += f.get(t) * g.get((t + n - x) % n).conj() * roots[(omega * t) % n].conj();
            }
            out.set(PhasePoint { x, omega }, acc);
        }
    }
    Ok(out)
}

/// STFT synthesis (adjoint under the grid pairing):
/// V_g^* F = (1/N) sum_z F(z) pi(z) g.
pub fn stft_synthesis(g: &Signal, f: &GridFunction) -> Result<Signal> {
    let n = g.n();
    check_dim(n, f.n())?;
    let roots = roots_of_unity(n);
    let mut data = vec![Complex64::new(0.0, 0.0); n];
    for z in f.points() {
        let c = f.get(z);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        for (t, v) in data.iter_mut().enumerate() {
            *v += c * roots[(z.omega * t) % n] * g.get((t + n - z.x) % n);
        }
    }
    for v in &mut data {
        *v /= n as f64;
    }
    Signal::new(data)
}

/// Cross-ambiguity function V_{phi1} phi2; its zero set governs injectivity
/// of the Berezin transform and the rank of the quantization map.
pub fn cross_ambiguity(phi1: &Signal, phi2: &Signal) -> Result<GridFunction> {
    stft(phi1, phi2)
}

/// Rank of the circulant of all N cyclic translates of `f`
/// (SVD, relative tolerance 1e-9). Equals the number of nonzero DFT
/// coefficients of `f`.
pub fn translate_span_rank(f: &Signal) -> Result<usize> {
    if f.is_zero() {
        return Err(TflocError::ZeroSignal);
    }
    let n = f.n();
    let m = DMatrix::from_fn(n, n, |t, x| f.get((t + n - x) % n));
    let svd = m.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    Ok(svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-9 * smax)
        .count())
}
