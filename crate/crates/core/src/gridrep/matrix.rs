use std::io::{Read, Write};
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Dense operator on a grid; entry `(i, j)` is `Δq·K(q_i, q_j)` so that a
/// matrix-vector product approximates the integral operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    grid: GridSpec,
    entries: DMatrix<Complex64>,
    hermitian_residual: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hermitian_residual: Option<f64>,
    rows: Vec<Vec<[f64; 2]>>,
}

impl OperatorMatrix {
    pub fn from_entries(grid: GridSpec, entries: DMatrix<Complex64>) -> Result<Self> {
        let n = grid.n();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::Dimension { expected: n, got: entries.nrows().max(entries.ncols()) });
        }
        Ok(Self { grid, entries, hermitian_residual: None })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, entries: DMatrix::zeros(grid.n(), grid.n()), hermitian_residual: None }
    }

    pub fn identity(grid: GridSpec) -> Self {
        Self { grid, entries: DMatrix::identity(grid.n(), grid.n()), hermitian_residual: Some(0.0) }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self { grid: self.grid, entries: self.entries.adjoint(), hermitian_residual: self.hermitian_residual }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { grid: self.grid, entries: &self.entries * c, hermitian_residual: None }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self { grid: self.grid, entries: &self.entries + &other.entries, hermitian_residual: None })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self { grid: self.grid, entries: &self.entries - &other.entries, hermitian_residual: None })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self { grid: self.grid, entries: &self.entries * &other.entries, hermitian_residual: None })
    }

    /// `[self, other] = self·other - other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if v.len() != self.grid.n() {
            return Err(Error::Dimension { expected: self.grid.n(), got: v.len() });
        }
        Ok(&self.entries * v)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self - other‖_F / ‖other‖_F` (absolute when `other` is zero).
    pub fn relative_frobenius_gap(&self, other: &Self) -> Result<f64> {
        let diff = self.try_sub(other)?.frobenius_norm();
        let base = other.frobenius_norm();
        Ok(if base > 0.0 { diff / base } else { diff })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }

    /// `max |M - M†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = self.entries[(i, j)] - self.entries[(j, i)].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Sets the Hermitian flag if `max |M - M†| <= tol · max |M|`.
    pub fn certify_hermitian(&mut self, tol: f64) -> Result<f64> {
        let residual = self.hermiticity_residual();
        if residual <= tol * self.max_abs().max(f64::MIN_POSITIVE) {
            self.hermitian_residual = Some(residual);
            Ok(residual)
        } else {
            Err(Error::NotHermitian { residual })
        }
    }

    /// Certified residual, if [`certify_hermitian`](Self::certify_hermitian) succeeded.
    pub fn hermitian_residual(&self) -> Option<f64> {
        self.hermitian_residual
    }

    /// `(M + M†)/2`, flagged Hermitian.
    pub fn hermitian_part(&self) -> Self {
        let entries = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        Self { grid: self.grid, entries, hermitian_residual: Some(0.0) }
    }

    pub fn to_json_writer<W: Write>(&self, w: W) -> Result<()> {
        let rows = self.entries.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect();
        let file = MatrixFile { grid: self.grid, hermitian_residual: self.hermitian_residual, rows };
        serde_json::to_writer(w, &file)?;
        Ok(())
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.to_json_writer(&mut buf)?;
        Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
    }

    pub fn from_json_reader<R: Read>(r: R) -> Result<Self> {
        let file: MatrixFile = serde_json::from_reader(r)?;
        let n = file.grid.n();
        if file.rows.len() != n || file.rows.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension { expected: n, got: file.rows.len() });
        }
        let entries = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = file.rows[i][j];
            Complex64::new(re, im)
        });
        Ok(Self { grid: file.grid, entries, hermitian_residual: file.hermitian_residual })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json_reader(s.as_bytes())
    }

    /// Row-major CSV, one `"re,im"` cell per entry.
    pub fn to_csv_writer<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for row in self.entries.row_iter() {
            out.write_record(row.iter().map(|z| format!("{},{}", z.re, z.im)))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn from_csv_reader<R: Read>(grid: GridSpec, r: R) -> Result<Self> {
        let n = grid.n();
        let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
        let mut entries = DMatrix::zeros(n, n);
        let mut count = 0;
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if i >= n || record.len() != n {
                return Err(Error::Dimension { expected: n, got: record.len().max(i + 1) });
            }
            for (j, cell) in record.iter().enumerate() {
                entries[(i, j)] = parse_cell(cell)?;
            }
            count += 1;
        }
        if count != n {
            return Err(Error::Dimension { expected: n, got: count });
        }
        Self::from_entries(grid, entries)
    }
}

fn parse_cell(cell: &str) -> Result<Complex64> {
    let bad = || Error::Invalid(format!("malformed matrix cell '{cell}'"));
    let (re, im) = cell.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    /// Panics on grid mismatch; use [`OperatorMatrix::try_add`] to handle it.
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.try_add(rhs).expect("operator grids differ")
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.try_sub(rhs).expect("operator grids differ")
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.try_mul(rhs).expect("operator grids differ")
    }
}
