use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// A point of the Siegel upper half space: symmetric `τ` with `Im τ` positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannMatrix {
    entries: DMatrix<Complex64>,
    y_min: f64,
}

/// On-disk layout: `{"g": 3, "re": [[..]], "im": [[..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TauFile {
    pub g: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl RiemannMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let g = entries.nrows();
        if g == 0 || entries.ncols() != g {
            return Err(Error::InvalidTau(
                "matrix must be square and nonempty".into(),
            ));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidTau("non-finite entry".into()));
        }
        let asym = (&entries - entries.transpose())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym >= SYMMETRY_TOL {
            return Err(Error::InvalidTau(format!(
                "not symmetric (defect {asym:e})"
            )));
        }
        let y_min = min_eigenvalue(&entries.map(|z| z.im));
        if y_min <= 0.0 {
            return Err(Error::InvalidTau(format!(
                "imaginary part is not positive definite (smallest eigenvalue {y_min:e})"
            )));
        }
        Ok(Self { entries, y_min })
    }

    pub fn from_parts(re: &DMatrix<f64>, im: &DMatrix<f64>) -> Result<Self> {
        if re.shape() != im.shape() {
            return Err(Error::InvalidTau(
                "real and imaginary parts differ in shape".into(),
            ));
        }
        Self::new(DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        }))
    }

    /// `diag(τ_1, …, τ_g)`.
    pub fn diagonal(values: &[Complex64]) -> Result<Self> {
        let g = values.len();
        Self::new(DMatrix::from_fn(g, g, |i, j| {
            if i == j {
                values[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// `i·I + scale·S` with `S` complex symmetric, entries uniform in `[-1, 1] + i[-1, 1]`;
    /// resampled until the imaginary part is positive definite.
    pub fn random_near_identity<R: Rng + ?Sized>(g: usize, scale: f64, rng: &mut R) -> Self {
        loop {
            let mut s = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
            for i in 0..g {
                for j in i..g {
                    let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    s[(i, j)] = z;
                    s[(j, i)] = z;
                }
            }
            let tau = DMatrix::from_fn(g, g, |i, j| {
                let base = if i == j {
                    Complex64::i()
                } else {
                    Complex64::new(0.0, 0.0)
                };
                base + s[(i, j)] * scale
            });
            if let Ok(t) = Self::new(tau) {
                return t;
            }
        }
    }

    pub fn genus(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Smallest eigenvalue of `Im τ`.
    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn to_file(&self) -> TauFile {
        let g = self.genus();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..g)
                .map(|i| (0..g).map(|j| f(&self.entries[(i, j)])).collect())
                .collect()
        };
        TauFile {
            g,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn from_file(file: &TauFile) -> Result<Self> {
        let g = file.g;
        let ok = |m: &Vec<Vec<f64>>| m.len() == g && m.iter().all(|r| r.len() == g);
        if !ok(&file.re) || !ok(&file.im) {
            return Err(Error::InvalidTau(format!(
                "expected {g}x{g} re and im arrays"
            )));
        }
        Self::new(DMatrix::from_fn(g, g, |i, j| {
            Complex64::new(file.re[i][j], file.im[i][j])
        }))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TauFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain data serializes")
    }
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
