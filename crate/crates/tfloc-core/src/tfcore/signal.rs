use num_complex::Complex64;

use crate::error::{Result, TflocError};

/// A point z = (x, omega) of the finite phase space Z_N x Z_N.
///
/// `x` is the time shift, `omega` the frequency shift; both are kept
/// reduced mod N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    pub x: usize,
    pub omega: usize,
}

impl PhasePoint {
    /// Reduce arbitrary integer coordinates mod `n`.
    pub fn new(x: i64, omega: i64, n: usize) -> Self {
        let n = n as i64;
        PhasePoint {
            x: x.rem_euclid(n) as usize,
            omega: omega.rem_euclid(n) as usize,
        }
    }

    pub fn neg(self, n: usize) -> Self {
        PhasePoint::new(-(self.x as i64), -(self.omega as i64), n)
    }

    pub fn sub(self, other: PhasePoint, n: usize) -> Self {
        PhasePoint::new(
            self.x as i64 - other.x as i64,
            self.omega as i64 - other.omega as i64,
            n,
        )
    }
}

/// The symplectic pairing Jz.w = z.omega * w.x - z.x * w.omega mod N.
pub fn symplectic_pairing(z: PhasePoint, w: PhasePoint, n: usize) -> usize {
    let v = z.omega as i64 * w.x as i64 - z.x as i64 * w.omega as i64;
    v.rem_euclid(n as i64) as usize
}

/// A length-N complex vector: a function on Z_N.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    n: usize,
    data: Vec<Complex64>,
}

impl Signal {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        let n = data.len();
        if n < 2 {
            return Err(TflocError::InvalidDimension(n));
        }
        Ok(Signal { n, data })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Signal::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_real(data: &[f64]) -> Result<Self> {
        Signal::new(data.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, t: usize) -> Complex64 {
        self.data[t % self.n]
    }

    /// l2 norm.
    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sesquilinear inner product <self, other> = sum self * conj(other).
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        check_dim(self.n, other.n)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn scaled(&self, c: Complex64) -> Signal {
        Signal {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        check_dim(self.n, other.n)?;
        Ok(Signal {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.norm_sqr() == 0.0)
    }

    pub fn normalized(mut self) -> Result<Signal> {
        let nrm = self.norm2();
        if nrm == 0.0 {
            return Err(TflocError::ZeroWindow);
        }
        for v in &mut self.data {
            *v /= nrm;
        }
        Ok(self)
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(TflocError::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}

/// Window specification for the built-in gallery.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowKind {
    /// Basis vector e_0.
    Delta,
    /// Normalized indicator of {0, .., L-1}.
    Rect(usize),
    /// Periodized Gaussian with width parameter sigma > 0.
    Gauss(f64),
    /// (e_0 + e_{N/2}) / sqrt(2); its self-ambiguity has exact zeros. N must be even.
    Zeromaker,
}

impl WindowKind {
    /// Parse the grammar "delta" | "rect:L" | "gauss:SIGMA" | "zeromaker".
    pub fn parse(s: &str) -> Result<Self> {
        if s == "delta" {
            return Ok(WindowKind::Delta);
        }
        if s == "zeromaker" {
            return Ok(WindowKind::Zeromaker);
        }
        if let Some(rest) = s.strip_prefix("rect:") {
            let l: usize = rest
                .parse()
                .map_err(|_| TflocError::InvalidWindowParam(format!("bad rect length {rest:?}")))?;
            return Ok(WindowKind::Rect(l));
        }
        if let Some(rest) = s.strip_prefix("gauss:") {
            let sigma: f64 = rest
                .parse()
                .map_err(|_| TflocError::InvalidWindowParam(format!("bad gauss sigma {rest:?}")))?;
            return Ok(WindowKind::Gauss(sigma));
        }
        Err(TflocError::InvalidWindowParam(format!(
            "unknown window spec {s:?}"
        )))
    }
}

impl std::fmt::Display for WindowKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WindowKind::Delta => write!(f, "delta"),
            WindowKind::Rect(l) => write!(f, "rect:{l}"),
            WindowKind::Gauss(s) => write!(f, "gauss:{s}"),
            WindowKind::Zeromaker => write!(f, "zeromaker"),
        }
    }
}

/// Build a unit-norm gallery window of dimension `n`.
pub fn window_gallery(kind: &WindowKind, n: usize) -> Result<Signal> {
    if n < 2 {
        return Err(TflocError::InvalidDimension(n));
    }
    match kind {
        WindowKind::Delta => {
            let mut data = vec![Complex64::new(0.0, 0.0); n];
            data[0] = Complex64::new(1.0, 0.0);
            Signal::new(data)
        }
        WindowKind::Rect(l) => {
            if *l < 1 || *l > n {
                return Err(TflocError::InvalidWindowParam(format!(
                    "rect length {l} out of range 1..={n}"
                )));
            }
            let mut data = vec![Complex64::new(0.0, 0.0); n];
            for v in data.iter_mut().take(*l) {
                *v = Complex64::new(1.0, 0.0);
            }
            Signal::new(data)?.normalized()
        }
        WindowKind::Gauss(sigma) => {
            if !(*sigma > 0.0) {
                return Err(TflocError::InvalidWindowParam(format!(
                    "gauss sigma {sigma} must be > 0"
                )));
            }
            // Periodization truncated at |m| <= 3; error below 1e-15 for sigma*N >= 4.
            let mut data = Vec::with_capacity(n);
            for t in 0..n {
                let mut v = 0.0;
                for m in -3i64..=3 {
                    let u = t as f64 + m as f64 * n as f64;
                    v += (-std::f64::consts::PI * u * u / (sigma * n as f64)).exp();
                }
                data.push(Complex64::new(v, 0.0));
            }
            Signal::new(data)?.normalized()
        }
        WindowKind::Zeromaker => {
            if n % 2 != 0 {
                return Err(TflocError::InvalidWindowParam(format!(
                    "zeromaker requires even N, got {n}"
                )));
            }
            let mut data = vec![Complex64::new(0.0, 0.0); n];
            let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            data[0] = c;
            data[n / 2] = c;
            Signal::new(data)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_point_reduction() {
        let z = PhasePoint::new(-1, 9, 4);
        assert_eq!(z, PhasePoint { x: 3, omega: 1 });
    }

    #[test]
    fn symplectic_pairing_examples() {
        let n = 8;
        // z=(1,0), w=(0,1) -> -1 mod N
        assert_eq!(
            symplectic_pairing(PhasePoint::new(1, 0, n), PhasePoint::new(0, 1, n), n),
            n - 1
        );
        // diagonal vanishes
        let z = PhasePoint::new(3, 5, n);
        assert_eq!(symplectic_pairing(z, z, n), 0);
        // z=(2,3), w=(4,1): (3*4 - 2*1) mod 8 = 2
        assert_eq!(
            symplectic_pairing(PhasePoint::new(2, 3, n), PhasePoint::new(4, 1, n), n),
            2
        );
        // antisymmetry
        let w = PhasePoint::new(4, 1, n);
        let a = symplectic_pairing(z, w, n) as i64;
        let b = symplectic_pairing(w, z, n) as i64;
        assert_eq!((a + b).rem_euclid(n as i64), 0);
    }

    #[test]
    fn delta_window() {
        let g = window_gallery(&WindowKind::Delta, 4).unwrap();
        assert_eq!(g.data()[0], Complex64::new(1.0, 0.0));
        assert!(g.data()[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn gauss_window_positive_unit_norm() {
        let g = window_gallery(&WindowKind::Gauss(1.0), 8).unwrap();
        assert!(g.data().iter().all(|c| c.re > 0.0 && c.im == 0.0));
        assert!((g.norm2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeromaker_shape() {
        let g = window_gallery(&WindowKind::Zeromaker, 2).unwrap();
        let c = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.data()[0].re - c).abs() < 1e-15);
        assert!((g.data()[1].re - c).abs() < 1e-15);
        assert!(window_gallery(&WindowKind::Zeromaker, 5).is_err());
    }

    #[test]
    fn rect_window_bounds() {
        assert!(window_gallery(&WindowKind::Rect(0), 4).is_err());
        assert!(window_gallery(&WindowKind::Rect(5), 4).is_err());
        let g = window_gallery(&WindowKind::Rect(4), 4).unwrap();
        assert!((g.norm2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn n_one_rejected() {
        assert!(Signal::new(vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(window_gallery(&WindowKind::Delta, 1).is_err());
    }

    #[test]
    fn window_spec_grammar_round_trip() {
        for s in ["delta", "rect:3", "gauss:1.5", "zeromaker"] {
            assert_eq!(WindowKind::parse(s).unwrap().to_string(), s);
        }
        assert!(WindowKind::parse("hamming").is_err());
        assert!(WindowKind::parse("gauss:abc").is_err());
    }
}
