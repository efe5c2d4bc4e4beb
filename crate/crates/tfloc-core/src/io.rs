//! JSON schemas for signals, grid functions, operators, singular systems,
//! and the injectivity report. Complex entries serialize as [re, im] pairs;
//! floats round-trip at full double precision.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::berezin::InjectivityReport;
use crate::error::{Result, TflocError};
use crate::oper::{OperatorMatrix, SingularSystem};
use crate::tfcore::{GridFunction, PhasePoint, Signal};

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignalJson {
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

impl SignalJson {
    pub fn from_signal(f: &Signal) -> Self {
        SignalJson {
            n: f.n(),
            data: (0..f.n()).map(|t| pair(f.get(t))).collect(),
        }
    }

    pub fn to_signal(&self) -> Result<Signal> {
        if self.data.len() != self.n {
            return Err(TflocError::DimensionMismatch {
                expected: self.n,
                got: self.data.len(),
            });
        }
        Signal::new(self.data.iter().map(|&p| unpair(p)).collect())
    }
}

/// Grid JSON uses data[x][omega].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJson {
    pub n: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl GridJson {
    pub fn from_grid(f: &GridFunction) -> Self {
        let n = f.n();
        GridJson {
            n,
            data: (0..n)
                .map(|x| {
                    (0..n)
                        .map(|omega| pair(f.get(PhasePoint { x, omega })))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_grid(&self) -> Result<GridFunction> {
        if self.data.len() != self.n || self.data.iter().any(|row| row.len() != self.n) {
            return Err(TflocError::InvalidInput(
                "grid data shape does not match n".into(),
            ));
        }
        let flat: Vec<Complex64> = self
            .data
            .iter()
            .flat_map(|row| row.iter().map(|&p| unpair(p)))
            .collect();
        GridFunction::from_vec(self.n, flat)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub n: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl OperatorJson {
    pub fn from_operator(t: &OperatorMatrix) -> Self {
        let n = t.n();
        OperatorJson {
            n,
            rows: (0..n)
                .map(|r| (0..n).map(|c| pair(t.get(r, c))).collect())
                .collect(),
        }
    }

    pub fn to_operator(&self) -> Result<OperatorMatrix> {
        if self.rows.len() != self.n || self.rows.iter().any(|row| row.len() != self.n) {
            return Err(TflocError::InvalidInput(
                "operator rows shape does not match n".into(),
            ));
        }
        OperatorMatrix::from_fn(self.n, |r, c| unpair(self.rows[r][c]))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularSystemJson {
    pub s: Vec<f64>,
    pub g: Vec<SignalJson>,
    pub h: Vec<SignalJson>,
}

impl SingularSystemJson {
    pub fn from_system(sys: &SingularSystem) -> Self {
        SingularSystemJson {
            s: sys.s.clone(),
            g: sys.g.iter().map(SignalJson::from_signal).collect(),
            h: sys.h.iter().map(SignalJson::from_signal).collect(),
        }
    }

    pub fn to_system(&self) -> Result<SingularSystem> {
        Ok(SingularSystem {
            s: self.s.clone(),
            g: self
                .g
                .iter()
                .map(SignalJson::to_signal)
                .collect::<Result<_>>()?,
            h: self
                .h
                .iter()
                .map(SignalJson::to_signal)
                .collect::<Result<_>>()?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InjectivityReportJson {
    pub n: usize,
    pub window1: String,
    pub window2: String,
    pub zero_set: Vec<[usize; 2]>,
    pub min_abs: f64,
    pub max_abs: f64,
    pub rank: usize,
    pub cond: f64,
    pub injective: bool,
    pub rank_law_holds: bool,
}

impl InjectivityReportJson {
    pub fn from_report(rep: &InjectivityReport, window1: &str, window2: &str) -> Self {
        InjectivityReportJson {
            n: rep.n,
            window1: window1.to_string(),
            window2: window2.to_string(),
            zero_set: rep.zero_set.iter().map(|z| [z.x, z.omega]).collect(),
            min_abs: rep.min_abs,
            max_abs: rep.max_abs,
            rank: rep.rank,
            cond: rep.cond,
            injective: rep.injective,
            rank_law_holds: rep.rank_law_holds,
        }
    }
}
