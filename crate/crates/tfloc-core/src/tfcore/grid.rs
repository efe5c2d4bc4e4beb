use num_complex::Complex64;

use crate::error::{Result, TflocError};
use crate::tfcore::signal::{symplectic_pairing, PhasePoint};

/// An N x N complex array over the phase space Z_N x Z_N, indexed `[x][omega]`.
///
/// Stored row-major with x as the slow index; this flattening order is shared
/// with the phase-map matrices in the `berezin` module.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    n: usize,
    data: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(TflocError::InvalidDimension(n));
        }
        Ok(GridFunction {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        })
    }

    pub fn constant(n: usize, c: Complex64) -> Result<Self> {
        let mut g = GridFunction::zeros(n)?;
        g.data.fill(c);
        Ok(g)
    }

    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n < 2 {
            return Err(TflocError::InvalidDimension(n));
        }
        if data.len() != n * n {
            return Err(TflocError::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(GridFunction { n, data })
    }

    /// Point mass `c` at z0, zero elsewhere.
    pub fn point_mass(n: usize, z0: PhasePoint, c: Complex64) -> Result<Self> {
        let mut g = GridFunction::zeros(n)?;
        g.set(z0, c);
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, z: PhasePoint) -> Complex64 {
        self.data[z.x * self.n + z.omega]
    }

    pub fn set(&mut self, z: PhasePoint, c: Complex64) {
        self.data[z.x * self.n + z.omega] = c;
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction {
            n: self.n,
            data: self.data.iter().map(|&c| f(c)).collect(),
        }
    }

    /// Iterate phase points in flattening order (x-major).
    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        let n = self.n;
        (0..n).flat_map(move |x| (0..n).map(move |omega| PhasePoint { x, omega }))
    }

    /// Grid pairing <F, G>_grid = (1/N) sum_z F(z) conj(G(z)).
    pub fn grid_inner(&self, other: &GridFunction) -> Result<Complex64> {
        if self.n != other.n {
            return Err(TflocError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let s: Complex64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s / self.n as f64)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.n != other.n {
            return Err(TflocError::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(GridFunction {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn min_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|c| c.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Unweighted l2 norm over all N^2 points.
    pub fn l2_unweighted(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Mixed-norm exponents; `f64::INFINITY` selects the sup over that axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormSpec {
    pub p: f64,
    pub q: f64,
    /// Per-point measure weight (default 1/N).
    pub weight: f64,
}

impl MixedNormSpec {
    pub fn new(p: f64, q: f64, weight: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(TflocError::InvalidExponent(p));
        }
        if !(q >= 1.0) {
            return Err(TflocError::InvalidExponent(q));
        }
        if !(weight > 0.0) {
            return Err(TflocError::InvalidInput(format!(
                "mixed norm weight {weight} must be > 0"
            )));
        }
        Ok(MixedNormSpec { p, q, weight })
    }

    pub fn lp(p: f64, n: usize) -> Result<Self> {
        MixedNormSpec::new(p, p, 1.0 / n as f64)
    }
}

/// Discrete L^{p,q} norm: inner sum over x, outer over omega, max replacing
/// sums at infinite exponents.
pub fn mixed_norm(f: &GridFunction, spec: &MixedNormSpec) -> f64 {
    let n = f.n();
    let inner = |omega: usize| -> f64 {
        if spec.p.is_infinite() {
            (0..n)
                .map(|x| f.get(PhasePoint { x, omega }).norm())
                .fold(0.0, f64::max)
        } else {
            let s: f64 = (0..n)
                .map(|x| f.get(PhasePoint { x, omega }).norm().powf(spec.p) * spec.weight)
                .sum();
            s.powf(1.0 / spec.p)
        }
    };
    if spec.q.is_infinite() {
        (0..n).map(inner).fold(0.0, f64::max)
    } else {
        let s: f64 = (0..n).map(|w| inner(w).powf(spec.q) * spec.weight).sum();
        s.powf(1.0 / spec.q)
    }
}

/// Relative-threshold zero set of a grid function.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    pub points: Vec<PhasePoint>,
    /// Whole grid vanishes: the zero set is all of Z_N x Z_N.
    pub degenerate: bool,
}

/// Points where |F(z)| <= tau * max|F|; an all-zero grid is flagged degenerate.
pub fn zero_set(f: &GridFunction, tau: f64) -> ZeroSet {
    let max = f.max_abs();
    if max == 0.0 {
        return ZeroSet {
            points: f.points().collect(),
            degenerate: true,
        };
    }
    let points = f.points().filter(|&z| f.get(z).norm() <= tau * max).collect();
    ZeroSet {
        points,
        degenerate: false,
    }
}

pub const ZERO_SET_TAU: f64 = 1e-12;

pub(crate) fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

/// Discrete symplectic Fourier transform
/// (F_sigma^{sign} G)(w) = (1/N) sum_z G(z) e^{sign * 2 pi i Jz.w / N}.
///
/// Each sign is its own inverse; the +1 and -1 transforms differ by the
/// parity map z -> -z.
pub fn symplectic_dft(f: &GridFunction, sign: i32) -> GridFunction {
    let n = f.n();
    let roots = roots_of_unity(n);
    let mut out = GridFunction::zeros(n).expect("n checked by input grid");
    for w in out.points().collect::<Vec<_>>() {
        let mut acc = Complex64::new(0.0, 0.0);
        for z in f.points() {
            let k = symplectic_pairing(z, w, n);
            let idx = if sign >= 0 { k } else { (n - k) % n };
            acc += f.get(z) * roots[idx];
        }
        out.set(w, acc / n as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(x: i64, w: i64, n: usize) -> PhasePoint {
        PhasePoint::new(x, w, n)
    }

    // Brute-force double sum at N=2, independent of the lookup-table path.
    fn sdft_oracle(f: &GridFunction, sign: i32) -> GridFunction {
        let n = f.n();
        let mut out = GridFunction::zeros(n).unwrap();
        for w in f.points().collect::<Vec<_>>() {
            let mut acc = Complex64::new(0.0, 0.0);
            for z in f.points() {
                let j = (z.omega as i64 * w.x as i64 - z.x as i64 * w.omega as i64) as f64;
                acc += f.get(z)
                    * Complex64::from_polar(
                        1.0,
                        sign as f64 * 2.0 * std::f64::consts::PI * j / n as f64,
                    );
            }
            out.set(w, acc / n as f64);
        }
        out
    }

    #[test]
    fn sdft_matches_brute_force() {
        let n = 2;
        let data: Vec<Complex64> = (0..4)
            .map(|k| Complex64::new(k as f64 + 0.5, -(k as f64) * 0.3))
            .collect();
        let f = GridFunction::from_vec(n, data).unwrap();
        for sign in [1, -1] {
            let a = symplectic_dft(&f, sign);
            let b = sdft_oracle(&f, sign);
            assert!(a.sub(&b).unwrap().max_abs() < 1e-14);
        }
    }

    #[test]
    fn sdft_constant_grid() {
        // constant 1 -> concentrated at w = 0 with value N (oracle-pinned table at N=2)
        let f = GridFunction::constant(2, Complex64::new(1.0, 0.0)).unwrap();
        let g = symplectic_dft(&f, 1);
        assert!((g.get(pp(0, 0, 2)) - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        for z in [pp(0, 1, 2), pp(1, 0, 2), pp(1, 1, 2)] {
            assert!(g.get(z).norm() < 1e-14);
        }
    }

    #[test]
    fn sdft_self_inverse_and_parity() {
        let n = 4;
        let data: Vec<Complex64> = (0..16)
            .map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos()))
            .collect();
        let f = GridFunction::from_vec(n, data).unwrap();
        // round trip with the same sign is the identity
        let id = symplectic_dft(&symplectic_dft(&f, 1), 1);
        assert!(id.sub(&f).unwrap().max_abs() < 1e-12);
        // opposite signs compose to parity
        let par = symplectic_dft(&symplectic_dft(&f, -1), 1);
        for z in f.points() {
            let d = (par.get(z) - f.get(z.neg(n))).norm();
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn sdft_point_mass_is_pure_phase() {
        let n = 4;
        let z0 = pp(1, 2, n);
        let f = GridFunction::point_mass(n, z0, Complex64::new(1.0, 0.0)).unwrap();
        let g = symplectic_dft(&f, 1);
        for w in f.points() {
            let j = symplectic_pairing(z0, w, n) as f64;
            let expect = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j / n as f64)
                / n as f64;
            assert!((g.get(w) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn mixed_norm_sup_of_ones() {
        let f = GridFunction::constant(4, Complex64::new(1.0, 0.0)).unwrap();
        let spec = MixedNormSpec::new(f64::INFINITY, f64::INFINITY, 0.25).unwrap();
        assert_eq!(mixed_norm(&f, &spec), 1.0);
    }

    #[test]
    fn mixed_norm_l2_ones() {
        // direct sum oracle: 16 points, weight 1/4 at each of two sum stages
        let f = GridFunction::constant(4, Complex64::new(1.0, 0.0)).unwrap();
        let spec = MixedNormSpec::new(2.0, 2.0, 0.25).unwrap();
        let oracle = (16.0 * 0.25 * 0.25f64).sqrt();
        assert!((mixed_norm(&f, &spec) - oracle).abs() < 1e-14);
    }

    #[test]
    fn mixed_norm_point_mass_l1() {
        // p=q=1, weight 1/N, N=2: value |c| * w^2 (single point survives both sums)
        let n = 2;
        let c = Complex64::new(-3.0, 4.0);
        let f = GridFunction::point_mass(n, pp(1, 0, n), c).unwrap();
        let spec = MixedNormSpec::new(1.0, 1.0, 0.5).unwrap();
        let oracle = 5.0 * 0.5 * 0.5;
        assert!((mixed_norm(&f, &spec) - oracle).abs() < 1e-14);
    }

    #[test]
    fn mixed_norm_axioms_sampled() {
        let n = 4;
        let f = GridFunction::from_vec(
            n,
            (0..16)
                .map(|k| Complex64::new((k as f64 * 1.3).sin(), (k as f64).cos()))
                .collect(),
        )
        .unwrap();
        let g = GridFunction::from_vec(
            n,
            (0..16)
                .map(|k| Complex64::new((k as f64 * 0.4).cos(), (k as f64 * 2.1).sin()))
                .collect(),
        )
        .unwrap();
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (1.0, 2.0), (f64::INFINITY, 1.0)] {
            let spec = MixedNormSpec::new(p, q, 0.25).unwrap();
            // absolute homogeneity
            let scaled = f.map(|c| c * Complex64::new(-2.5, 0.0));
            assert!(
                (mixed_norm(&scaled, &spec) - 2.5 * mixed_norm(&f, &spec)).abs()
                    < 1e-12 * mixed_norm(&f, &spec).max(1.0)
            );
            // triangle inequality
            let sum = GridFunction::from_vec(
                n,
                f.data().iter().zip(g.data()).map(|(a, b)| a + b).collect(),
            )
            .unwrap();
            assert!(
                mixed_norm(&sum, &spec)
                    <= mixed_norm(&f, &spec) + mixed_norm(&g, &spec) + 1e-12
            );
        }
    }

    #[test]
    fn zero_set_positive_grid_empty() {
        let f = GridFunction::constant(4, Complex64::new(0.5, 0.0)).unwrap();
        let zs = zero_set(&f, ZERO_SET_TAU);
        assert!(zs.points.is_empty());
        assert!(!zs.degenerate);
    }

    #[test]
    fn zero_set_all_zero_degenerate() {
        let f = GridFunction::zeros(3).unwrap();
        let zs = zero_set(&f, ZERO_SET_TAU);
        assert!(zs.degenerate);
        assert_eq!(zs.points.len(), 9);
    }
}
