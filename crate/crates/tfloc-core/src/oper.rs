//! Dense operators on C^N: localization operators, SVD, Schatten norms,
//! Hilbert-Schmidt pairing, and the spreading representation
//! T = sum_w eta(w) pi(w).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, TflocError};
use crate::tfcore::{GridFunction, PhasePoint, Signal};

/// A dense N x N complex matrix acting on signals.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    n: usize,
    m: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        let n = m.nrows();
        if n < 2 {
            return Err(TflocError::InvalidDimension(n));
        }
        if m.ncols() != n {
            return Err(TflocError::DimensionMismatch {
                expected: n,
                got: m.ncols(),
            });
        }
        Ok(OperatorMatrix { n, m })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        if n < 2 {
            return Err(TflocError::InvalidDimension(n));
        }
        Ok(OperatorMatrix {
            n,
            m: DMatrix::from_fn(n, n, f),
        })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Rank-one operator <., g> h, i.e. the matrix h g^dagger.
    pub fn rank_one(h: &Signal, g: &Signal) -> Result<Self> {
        crate::tfcore::check_dim(h.n(), g.n())?;
        Self::from_fn(h.n(), |i, j| h.get(i) * g.get(j).conj())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        crate::tfcore::check_dim(self.n, f.n())?;
        let data = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.m[(i, j)] * f.get(j)).sum())
            .collect();
        Signal::new(data)
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            n: self.n,
            m: self.m.adjoint(),
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        crate::tfcore::check_dim(self.n, other.n)?;
        Ok(OperatorMatrix {
            n: self.n,
            m: &self.m + &other.m,
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        crate::tfcore::check_dim(self.n, other.n)?;
        Ok(OperatorMatrix {
            n: self.n,
            m: &self.m - &other.m,
        })
    }

    pub fn scaled(&self, c: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            n: self.n,
            m: self.m.map(|v| v * c),
        }
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        crate::tfcore::check_dim(self.n, other.n)?;
        Ok(OperatorMatrix {
            n: self.n,
            m: &self.m * &other.m,
        })
    }

    /// Frobenius / Hilbert-Schmidt norm, entrywise.
    pub fn hs_norm(&self) -> f64 {
        self.m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// The time-frequency shift pi(z) as a matrix.
pub fn shift_operator(z: PhasePoint, n: usize) -> Result<OperatorMatrix> {
    let roots = crate::tfcore::roots_of_unity(n);
    OperatorMatrix::from_fn(n, |t, s| {
        if s == (t + n - z.x % n) % n {
            roots[(z.omega * t) % n]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Localization operator A_a = (1/N) sum_z a(z) (pi(z) phi2)(pi(z) phi1)^dagger:
/// analyze with phi1, multiply by the symbol, synthesize with phi2.
pub fn localization_operator(
    a: &GridFunction,
    phi1: &Signal,
    phi2: &Signal,
) -> Result<OperatorMatrix> {
    let n = a.n();
    crate::tfcore::check_dim(n, phi1.n())?;
    crate::tfcore::check_dim(n, phi2.n())?;
    if phi1.is_zero() || phi2.is_zero() {
        return Err(TflocError::ZeroWindow);
    }
    let roots = crate::tfcore::roots_of_unity(n);
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for z in a.points() {
        let c = a.get(z);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        // u = pi(z) phi2, v = pi(z) phi1
        for t in 0..n {
            let u = roots[(z.omega * t) % n] * phi2.get((t + n - z.x) % n);
            for s in 0..n {
                let v = roots[(z.omega * s) % n] * phi1.get((s + n - z.x) % n);
                m[(t, s)] += c * u * v.conj();
            }
        }
    }
    m /= Complex64::new(n as f64, 0.0);
    OperatorMatrix::from_matrix(m)
}

/// Singular system s, g, h with T = sum_k s_k <., g_k> h_k.
#[derive(Debug, Clone)]
pub struct SingularSystem {
    pub s: Vec<f64>,
    /// Right orthonormal family (analysis vectors).
    pub g: Vec<Signal>,
    /// Left orthonormal family (synthesis vectors).
    pub h: Vec<Signal>,
}

impl SingularSystem {
    pub fn reconstruct(&self, n: usize) -> Result<OperatorMatrix> {
        let mut acc = OperatorMatrix::zeros(n)?;
        for ((s, g), h) in self.s.iter().zip(&self.g).zip(&self.h) {
            let term = OperatorMatrix::rank_one(h, g)?.scaled(Complex64::new(*s, 0.0));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// SVD with singular values sorted nonincreasing.
pub fn singular_system(t: &OperatorMatrix) -> SingularSystem {
    let svd = t.m.clone().svd(true, true);
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let mut s = Vec::new();
    let mut g = Vec::new();
    let mut h = Vec::new();
    for &k in &order {
        s.push(svd.singular_values[k]);
        // rows of V^T are conjugated right singular vectors
        g.push(Signal::new(vt.row(k).iter().map(|c| c.conj()).collect()).expect("n >= 2"));
        h.push(Signal::new(u.column(k).iter().cloned().collect()).expect("n >= 2"));
    }
    SingularSystem { s, g, h }
}

/// Schatten p-norm; p = infinity gives the operator norm.
pub fn schatten_norm(t: &OperatorMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(TflocError::InvalidExponent(p));
    }
    let sys = singular_system(t);
    if p.is_infinite() {
        Ok(sys.s.first().copied().unwrap_or(0.0))
    } else {
        Ok(sys.s.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
    }
}

/// Hilbert-Schmidt inner product <A, T> = trace(T^dagger A) = sum A .* conj(T).
pub fn hs_inner(a: &OperatorMatrix, t: &OperatorMatrix) -> Result<Complex64> {
    crate::tfcore::check_dim(a.n, t.n)?;
    Ok(a.m
        .iter()
        .zip(t.m.iter())
        .map(|(x, y)| x * y.conj())
        .sum())
}

/// Spreading coefficients of an operator: T = sum_w eta(w) pi(w).
#[derive(Debug, Clone)]
pub struct SpreadingCoeffs {
    pub eta: GridFunction,
}

/// eta(w) = trace(pi(w)^dagger T) / N.
pub fn to_spreading(t: &OperatorMatrix) -> SpreadingCoeffs {
    let n = t.n;
    let roots = crate::tfcore::roots_of_unity(n);
    let mut eta = GridFunction::zeros(n).expect("operator dimension >= 2");
    for w in eta.points().collect::<Vec<_>>() {
        // trace(pi(w)^dagger T) = sum_t conj(pi(w)[t, t-x]) T[t, t-x]
        let mut acc = Complex64::new(0.0, 0.0);
        for row in 0..n {
            let col = (row + n - w.x) % n;
            acc += roots[(w.omega * row) % n].conj() * t.m[(row, col)];
        }
        eta.set(w, acc / n as f64);
    }
    SpreadingCoeffs { eta }
}

pub fn from_spreading(coeffs: &SpreadingCoeffs) -> OperatorMatrix {
    let n = coeffs.eta.n();
    let roots = crate::tfcore::roots_of_unity(n);
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for w in coeffs.eta.points() {
        let c = coeffs.eta.get(w);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        for row in 0..n {
            let col = (row + n - w.x) % n;
            m[(row, col)] += c * roots[(w.omega * row) % n];
        }
    }
    OperatorMatrix::from_matrix(m).expect("square by construction")
}

/// Unitary DFT matrix (F f)(k) = N^{-1/2} sum_t f(t) e^{-2 pi i k t / N}.
pub fn dft_operator(n: usize) -> Result<OperatorMatrix> {
    let roots = crate::tfcore::roots_of_unity(n);
    let scale = 1.0 / (n as f64).sqrt();
    OperatorMatrix::from_fn(n, |k, t| roots[(k * t) % n].conj() * scale)
}

/// splitmix64 with the standard finalizer; the documented bit-exact stream
/// behind all seeded test corpora.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in (0, 1): ((x >> 11) + 0.5) * 2^-53.
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Box-Muller pair: (r cos a, r sin a) with r = sqrt(-2 ln u1), a = 2 pi u2.
    pub fn next_normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let a = 2.0 * std::f64::consts::PI * u2;
        (r * a.cos(), r * a.sin())
    }

    /// Standard complex normal: one Box-Muller pair as (re, im).
    pub fn next_complex_normal(&mut self) -> Complex64 {
        let (re, im) = self.next_normal_pair();
        Complex64::new(re, im)
    }

    pub fn next_signal(&mut self, n: usize) -> Result<Signal> {
        Signal::new((0..n).map(|_| self.next_complex_normal()).collect())
    }

    pub fn next_grid(&mut self, n: usize) -> Result<GridFunction> {
        GridFunction::from_vec(n, (0..n * n).map(|_| self.next_complex_normal()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RandomClass {
    GinibreDense,
    RankK(usize),
    Hermitian,
}

impl RandomClass {
    /// Parse "ginibre-dense" | "rank-K" | "hermitian".
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ginibre-dense" => Ok(RandomClass::GinibreDense),
            "hermitian" => Ok(RandomClass::Hermitian),
            _ => {
                if let Some(rest) = s.strip_prefix("rank-") {
                    let k: usize = rest.parse().map_err(|_| {
                        TflocError::InvalidInput(format!("bad rank in random class {s:?}"))
                    })?;
                    Ok(RandomClass::RankK(k))
                } else {
                    Err(TflocError::InvalidInput(format!(
                        "unknown random class {s:?}"
                    )))
                }
            }
        }
    }
}

impl std::fmt::Display for RandomClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RandomClass::GinibreDense => write!(f, "ginibre-dense"),
            RandomClass::RankK(k) => write!(f, "rank-{k}"),
            RandomClass::Hermitian => write!(f, "hermitian"),
        }
    }
}

/// Deterministic seeded random operator. Entries are drawn row-major from the
/// splitmix64 normal stream.
pub fn random_operator(seed: u64, n: usize, class: &RandomClass) -> Result<OperatorMatrix> {
    let mut rng = SplitMix64::new(seed);
    match class {
        RandomClass::GinibreDense => {
            let mut m = DMatrix::from_element(n.max(2), n, Complex64::new(0.0, 0.0));
            if n < 2 {
                return Err(TflocError::InvalidDimension(n));
            }
            for row in 0..n {
                for col in 0..n {
                    m[(row, col)] = rng.next_complex_normal();
                }
            }
            OperatorMatrix::from_matrix(m)
        }
        RandomClass::RankK(k) => {
            if *k > n {
                return Err(TflocError::RankExceedsDimension { k: *k, n });
            }
            let mut acc = OperatorMatrix::zeros(n)?;
            for _ in 0..*k {
                let u = rng.next_signal(n)?;
                let v = rng.next_signal(n)?;
                acc = acc.add(&OperatorMatrix::rank_one(&u, &v)?)?;
            }
            Ok(acc)
        }
        RandomClass::Hermitian => {
            let g = random_operator(seed, n, &RandomClass::GinibreDense)?;
            let mut m = (g.m.clone() + g.m.adjoint()) * Complex64::new(0.5, 0.0);
            // exact Hermitian symmetry, not just up to rounding
            for row in 0..n {
                m[(row, row)] = Complex64::new(m[(row, row)].re, 0.0);
                for col in 0..row {
                    let v = m[(row, col)];
                    m[(col, row)] = v.conj();
                }
            }
            OperatorMatrix::from_matrix(m)
        }
    }
}
