//! The Berezin transform, its matrix realization, the essential kernel with
//! the reproducing formula, and injectivity diagnostics tying the kernel of
//! the transform to the ambiguity zero set.
//!
//! Convention, pinned by exhaustive small-N oracles: `berezin_transform`
//! follows the pairing BT(z) = <T pi(z) phi2, pi(z) phi1>. The map realized
//! by `berezin_matrix` is its window-swapped sibling
//! z -> <T pi(z) phi1, pi(z) phi2> (the diagonal of the essential kernel);
//! that is the map whose adjoint under the grid / Hilbert-Schmidt pairings is
//! the quantization a -> A_a^{phi1,phi2}, so `berezin_matrix` equals
//! N times the conjugate transpose of `quantization_matrix` exactly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, TflocError};
use crate::oper::{OperatorMatrix, SingularSystem};
use crate::tfcore::{
    check_dim, cross_ambiguity, roots_of_unity, stft, tf_shift, zero_set, GridFunction,
    PhasePoint, Signal, ZERO_SET_TAU,
};

/// An N^2 x N^2 complex matrix between the symbol space and the operator
/// space. Symbol grids are flattened x-major (index x*N + omega); operators
/// row-major (index row*N + col). Both phase-map matrices share this
/// convention so adjointness is a literal conjugate-transpose statement.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMapMatrix {
    n: usize,
    m: DMatrix<Complex64>,
}

impl PhaseMapMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    /// Numerical rank with relative tolerance 1e-9.
    pub fn rank(&self) -> usize {
        let svd = self.m.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        svd.singular_values
            .iter()
            .filter(|&&s| s > 1e-9 * smax)
            .count()
    }

    /// Condition number s_max / s_min over numerically nonzero singular values.
    pub fn cond(&self) -> f64 {
        let svd = self.m.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let smin = svd
            .singular_values
            .iter()
            .cloned()
            .filter(|&s| s > 1e-9 * smax)
            .fold(f64::INFINITY, f64::min);
        smax / smin
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.n * self.n, v.len())?;
        let x = DMatrix::from_column_slice(self.n * self.n, 1, v);
        Ok((&self.m * x).iter().cloned().collect())
    }

    /// Least-squares solve via SVD (used to invert the Berezin map when it
    /// has full rank).
    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.n * self.n, rhs.len())?;
        let svd = self.m.clone().svd(true, true);
        let b = DMatrix::from_column_slice(self.n * self.n, 1, rhs);
        let sol = svd
            .solve(&b, 1e-12)
            .map_err(|e| TflocError::InvalidInput(e.to_string()))?;
        Ok(sol.iter().cloned().collect())
    }
}

/// Row-major flattening of an operator to the vector convention used by
/// `PhaseMapMatrix`.
pub fn flatten_operator(t: &OperatorMatrix) -> Vec<Complex64> {
    let n = t.n();
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            out.push(t.get(row, col));
        }
    }
    out
}

pub fn unflatten_operator(n: usize, v: &[Complex64]) -> Result<OperatorMatrix> {
    check_dim(n * n, v.len())?;
    OperatorMatrix::from_fn(n, |row, col| v[row * n + col])
}

/// Berezin transform BT(z) = <T pi(z) phi2, pi(z) phi1>.
pub fn berezin_transform(
    t: &OperatorMatrix,
    phi1: &Signal,
    phi2: &Signal,
) -> Result<GridFunction> {
    let n = t.n();
    check_dim(n, phi1.n())?;
    check_dim(n, phi2.n())?;
    let mut out = GridFunction::zeros(n)?;
    for z in out.points().collect::<Vec<_>>() {
        let u = tf_shift(z, phi2);
        let v = tf_shift(z, phi1);
        out.set(z, t.apply(&u)?.inner(&v)?);
    }
    Ok(out)
}

/// Berezin transform from a singular system:
/// BT(z) = sum_k s_k V_{phi1} h_k(z) conj(V_{phi2} g_k(z)).
pub fn berezin_from_singular(
    sys: &SingularSystem,
    phi1: &Signal,
    phi2: &Signal,
) -> Result<GridFunction> {
    let n = phi1.n();
    check_dim(n, phi2.n())?;
    if sys.g.len() != sys.s.len() || sys.h.len() != sys.s.len() {
        return Err(TflocError::InvalidSingularSystem(format!(
            "family lengths {}/{} do not match {} singular values",
            sys.g.len(),
            sys.h.len(),
            sys.s.len()
        )));
    }
    let mut out = GridFunction::zeros(n)?;
    for ((s, g), h) in sys.s.iter().zip(&sys.g).zip(&sys.h) {
        check_dim(n, g.n())?;
        check_dim(n, h.n())?;
        let vh = stft(phi1, h)?;
        let vg = stft(phi2, g)?;
        for z in out.points().collect::<Vec<_>>() {
            let add = *s * vh.get(z) * vg.get(z).conj();
            out.set(z, out.get(z) + add);
        }
    }
    Ok(out)
}

/// The essential kernel K_T(z, w) = <T pi(z) phi1, pi(w) phi2>, indexed by
/// flattened phase points (z rows, w columns).
#[derive(Debug, Clone)]
pub struct KernelGrid {
    n: usize,
    values: DMatrix<Complex64>,
}

impl KernelGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, z: PhasePoint, w: PhasePoint) -> Complex64 {
        self.values[(z.x * self.n + z.omega, w.x * self.n + w.omega)]
    }

    /// Diagonal slice K(z, z); equals the window-swapped Berezin transform
    /// berezin_transform(T, phi2, phi1).
    pub fn diagonal(&self) -> GridFunction {
        let n = self.n;
        let mut out = GridFunction::zeros(n).expect("kernel dimension >= 2");
        for x in 0..n {
            for omega in 0..n {
                let z = PhasePoint { x, omega };
                out.set(z, self.get(z, z));
            }
        }
        out
    }
}

pub fn essential_kernel(
    t: &OperatorMatrix,
    phi1: &Signal,
    phi2: &Signal,
) -> Result<KernelGrid> {
    let n = t.n();
    check_dim(n, phi1.n())?;
    check_dim(n, phi2.n())?;
    if phi1.is_zero() || phi2.is_zero() {
        return Err(TflocError::ZeroWindow);
    }
    let points: Vec<PhasePoint> = (0..n)
        .flat_map(|x| (0..n).map(move |omega| PhasePoint { x, omega }))
        .collect();
    let shifted1: Vec<Signal> = points.iter().map(|&z| {
        t.apply(&tf_shift(z, phi1)).expect("dimensions checked")
    }).collect();
    let shifted2: Vec<Signal> = points.iter().map(|&w| tf_shift(w, phi2)).collect();
    let values = DMatrix::from_fn(n * n, n * n, |zi, wi| {
        shifted1[zi].inner(&shifted2[wi]).expect("dimensions checked")
    });
    Ok(KernelGrid { n, values })
}

/// Reproducing formula: recovers T f from the essential kernel,
/// Tf = (|phi1| |phi2|)^{-2} (1/N^2) sum_{z,w} V_{phi1}f(z) K(z,w) pi(w) phi2.
pub fn kernel_reproduce(
    k: &KernelGrid,
    phi1: &Signal,
    phi2: &Signal,
    f: &Signal,
) -> Result<Signal> {
    let n = k.n();
    check_dim(n, phi1.n())?;
    check_dim(n, phi2.n())?;
    check_dim(n, f.n())?;
    if phi1.is_zero() || phi2.is_zero() {
        return Err(TflocError::ZeroWindow);
    }
    let vf = stft(phi1, f)?;
    let roots = roots_of_unity(n);
    let mut data = vec![Complex64::new(0.0, 0.0); n];
    for w in vf.points() {
        // coefficient of pi(w) phi2 in the double sum
        let mut coeff = Complex64::new(0.0, 0.0);
        for z in vf.points() {
            coeff += vf.get(z) * k.get(z, w);
        }
        if coeff.norm_sqr() == 0.0 {
            continue;
        }
        for (t, v) in data.iter_mut().enumerate() {
            *v += coeff * roots[(w.omega * t) % n] * phi2.get((t + n - w.x) % n);
        }
    }
    let scale = 1.0
        / (phi1.norm2() * phi2.norm2()).powi(2)
        / (n * n) as f64;
    for v in &mut data {
        *v *= scale;
    }
    Signal::new(data)
}

/// Matrix of the quantization map a -> A_a^{phi1,phi2} under the declared
/// flattening.
pub fn quantization_matrix(phi1: &Signal, phi2: &Signal) -> Result<PhaseMapMatrix> {
    let n = phi1.n();
    check_dim(n, phi2.n())?;
    if phi1.is_zero() || phi2.is_zero() {
        return Err(TflocError::ZeroWindow);
    }
    let points: Vec<PhasePoint> = (0..n)
        .flat_map(|x| (0..n).map(move |omega| PhasePoint { x, omega }))
        .collect();
    let u: Vec<Signal> = points.iter().map(|&z| tf_shift(z, phi2)).collect();
    let v: Vec<Signal> = points.iter().map(|&z| tf_shift(z, phi1)).collect();
    // column z is vec(A_{delta_z}) = (1/N) vec((pi(z)phi2)(pi(z)phi1)^dagger)
    let m = DMatrix::from_fn(n * n, n * n, |op_idx, zi| {
        let (row, col) = (op_idx / n, op_idx % n);
        u[zi].get(row) * v[zi].get(col).conj() / n as f64
    });
    Ok(PhaseMapMatrix { n, m })
}

/// Matrix of the adjoint-side Berezin map T -> <T pi(z) phi1, pi(z) phi2>
/// (the essential-kernel diagonal). Satisfies
/// berezin_matrix = N * quantization_matrix^dagger exactly.
pub fn berezin_matrix(phi1: &Signal, phi2: &Signal) -> Result<PhaseMapMatrix> {
    let n = phi1.n();
    check_dim(n, phi2.n())?;
    if phi1.is_zero() || phi2.is_zero() {
        return Err(TflocError::ZeroWindow);
    }
    let points: Vec<PhasePoint> = (0..n)
        .flat_map(|x| (0..n).map(move |omega| PhasePoint { x, omega }))
        .collect();
    let u1: Vec<Signal> = points.iter().map(|&z| tf_shift(z, phi1)).collect();
    let u2: Vec<Signal> = points.iter().map(|&z| tf_shift(z, phi2)).collect();
    // row z, column (t,s): <T pi(z)phi1, pi(z)phi2> = sum_{t,s} T[t,s] (pi phi1)(s) conj((pi phi2)(t))
    let m = DMatrix::from_fn(n * n, n * n, |zi, op_idx| {
        let (row, col) = (op_idx / n, op_idx % n);
        u1[zi].get(col) * u2[zi].get(row).conj()
    });
    Ok(PhaseMapMatrix { n, m })
}

/// Apply the adjoint-side Berezin map (the one realized by `berezin_matrix`)
/// directly to an operator.
pub fn berezin_adjoint_map(
    t: &OperatorMatrix,
    phi1: &Signal,
    phi2: &Signal,
) -> Result<GridFunction> {
    berezin_transform(t, phi2, phi1)
}

/// Injectivity diagnostics for a window pair.
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub n: usize,
    pub zero_set: Vec<PhasePoint>,
    pub min_abs: f64,
    pub max_abs: f64,
    pub rank: usize,
    pub cond: f64,
    pub injective: bool,
    pub rank_law_holds: bool,
}

/// Zero set of the cross-ambiguity, rank and condition number of the
/// quantization matrix, and the rank law rank = N^2 - |zero set|.
pub fn injectivity_report(phi1: &Signal, phi2: &Signal) -> Result<InjectivityReport> {
    let n = phi1.n();
    check_dim(n, phi2.n())?;
    if phi1.is_zero() || phi2.is_zero() {
        return Err(TflocError::ZeroWindow);
    }
    let amb = cross_ambiguity(phi1, phi2)?;
    let zs = zero_set(&amb, ZERO_SET_TAU);
    let q = quantization_matrix(phi1, phi2)?;
    let rank = q.rank();
    let cond = q.cond();
    let injective = zs.points.is_empty();
    let rank_law_holds = rank == n * n - zs.points.len();
    Ok(InjectivityReport {
        n,
        zero_set: zs.points,
        min_abs: amb.min_abs(),
        max_abs: amb.max_abs(),
        rank,
        cond,
        injective,
        rank_law_holds,
    })
}
