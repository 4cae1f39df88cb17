use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridrep::GridSpec;

/// Complex table over the phase-space grid: entry `(a, m)` is the value at
/// `(q_a, p_m)` with `m` an FFT slot of the momentum grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceFunction {
    grid: GridSpec,
    values: DMatrix<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    grid: GridSpec,
    q: Vec<f64>,
    p: Vec<f64>,
    /// `rows[k][a]` is the value at `(q[a], p[k])`, momenta ascending.
    rows: Vec<Vec<[f64; 2]>>,
}

impl PhaseSpaceFunction {
    pub fn new(grid: GridSpec, values: DMatrix<Complex64>) -> Result<Self> {
        let n = grid.n();
        if values.nrows() != n || values.ncols() != n {
            return Err(Error::Dimension { expected: n, got: values.nrows().max(values.ncols()) });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64, f64) -> Complex64>(grid: GridSpec, f: F) -> Self {
        let n = grid.n();
        let values = DMatrix::from_fn(n, n, |a, m| f(grid.q(a), grid.p(m)));
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    pub fn get(&self, a: usize, m: usize) -> Complex64 {
        self.values[(a, m)]
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self { grid: self.grid, values: self.values.map(f) }
    }

    /// `∬ A dq dp` by the rectangle rule on the grid.
    pub fn integrate(&self) -> Complex64 {
        self.values.sum() * (self.grid.dq() * self.grid.dp())
    }

    /// `∬ A·B dq dp`.
    pub fn pair(&self, other: &Self) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        let s: Complex64 = self.values.iter().zip(other.values.iter()).map(|(a, b)| a * b).sum();
        Ok(s * (self.grid.dq() * self.grid.dp()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.values.iter().zip(other.values.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// CSV grid dump: the header row holds the q values, the first column the
    /// p values (ascending), and each cell the requested real view of the value.
    pub fn to_csv_writer<W: Write>(&self, w: W, part: CsvPart) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).flexible(true).from_writer(w);
        let mut header = vec![String::from("p\\q")];
        header.extend(self.grid.q_points().iter().map(|q| q.to_string()));
        out.write_record(&header)?;
        for m in self.grid.ascending_p_slots() {
            let mut row = vec![self.grid.p(m).to_string()];
            for a in 0..self.grid.n() {
                let z = self.values[(a, m)];
                row.push(match part {
                    CsvPart::Real => z.re.to_string(),
                    CsvPart::Imag => z.im.to_string(),
                    CsvPart::Abs => z.norm().to_string(),
                });
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json_writer<W: Write>(&self, w: W) -> Result<()> {
        let slots = self.grid.ascending_p_slots();
        let rows = slots
            .iter()
            .map(|&m| (0..self.grid.n()).map(|a| [self.values[(a, m)].re, self.values[(a, m)].im]).collect())
            .collect();
        let file = TableFile {
            grid: self.grid,
            q: self.grid.q_points(),
            p: slots.iter().map(|&m| self.grid.p(m)).collect(),
            rows,
        };
        serde_json::to_writer(w, &file)?;
        Ok(())
    }

    pub fn from_json_reader<R: Read>(r: R) -> Result<Self> {
        let file: TableFile = serde_json::from_reader(r)?;
        let grid = file.grid;
        let n = grid.n();
        if file.rows.len() != n || file.rows.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension { expected: n, got: file.rows.len() });
        }
        let mut values = DMatrix::zeros(n, n);
        for (k, m) in grid.ascending_p_slots().into_iter().enumerate() {
            for a in 0..n {
                let [re, im] = file.rows[k][a];
                values[(a, m)] = Complex64::new(re, im);
            }
        }
        Ok(Self { grid, values })
    }
}

/// Which real-valued view of a complex table a CSV dump contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsvPart {
    Real,
    Imag,
    Abs,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let grid = GridSpec::new(16, 2.0, 1.0).unwrap();
        let f = PhaseSpaceFunction::from_fn(grid, |q, p| Complex64::new(q * p, q - p / 3.0));
        let mut buf = Vec::new();
        f.to_json_writer(&mut buf).unwrap();
        assert_eq!(PhaseSpaceFunction::from_json_reader(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn csv_layout() {
        let grid = GridSpec::new(16, 2.0, 1.0).unwrap();
        let f = PhaseSpaceFunction::from_fn(grid, |q, p| Complex64::new(q + 10.0 * p, 0.0));
        let mut buf = Vec::new();
        f.to_csv_writer(&mut buf, CsvPart::Real).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert!(lines[0].starts_with("p\\q,-2,"));
        let first: Vec<f64> = lines[1].split(',').map(|s| s.parse().unwrap()).collect();
        let p0 = grid.p(grid.ascending_p_slots()[0]);
        assert_eq!(first[0], p0);
        assert_eq!(first[1], -2.0 + 10.0 * p0);
    }

    #[test]
    fn integrate_constant() {
        let grid = GridSpec::new(32, 4.0, 0.5).unwrap();
        let f = PhaseSpaceFunction::from_fn(grid, |_, _| Complex64::new(1.0, 0.0));
        let area = 2.0 * grid.half_width() * grid.n() as f64 * grid.dp();
        assert!((f.integrate().re - area).abs() < 1e-9);
    }
}
