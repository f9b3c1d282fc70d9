//! Questionnaire reliability: Cronbach's alpha, item correlations and the
//! eigenvalue spectrum of the correlation matrix.

use serde::Serialize;

use crate::error::{Error, Result};

/// Respondents by items.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMatrix {
    items: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ResponseMatrix {
    pub fn new(items: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidMatrix("no items".into()));
        }
        if rows.len() < 2 {
            return Err(Error::InvalidMatrix(format!(
                "{} respondent(s), at least 2 required",
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != items.len() {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    items.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has a non-finite entry",
                    i + 1
                )));
            }
        }
        Ok(ResponseMatrix { items, rows })
    }

    /// Items named `q1..qk`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        Self::new((1..=k).map(|i| format!("q{i}")).collect(), rows)
    }

    /// Parses CSV with a header row naming the items.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let items: Vec<String> = reader
            .headers()
            .map_err(|e| csv_error(&e, 1))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(&e, rows.len() as u64 + 2))?;
            let line = record
                .position()
                .map_or(rows.len() as u64 + 2, |p| p.line());
            let row = record
                .iter()
                .enumerate()
                .map(|(col, field)| {
                    field.parse::<f64>().map_err(|_| Error::Csv {
                        line,
                        message: format!(
                            "`{field}` in column {} is not a number",
                            items.get(col).map_or("?", String::as_str)
                        ),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Self::new(items, rows)
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn respondents(&self) -> usize {
        self.rows.len()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    fn row_sums(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }
}

fn csv_error(e: &csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Csv {
        line,
        message: e.to_string(),
    }
}

/// Divisor used for variances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceDivisor {
    /// `n - 1`
    Sample,
    /// `n`
    Population,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn variance(xs: &[f64], divisor: VarianceDivisor) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    let d = match divisor {
        VarianceDivisor::Sample => xs.len() as f64 - 1.0,
        VarianceDivisor::Population => xs.len() as f64,
    };
    ss / d
}

/// `(k / (k - 1)) * (1 - Σ var(item) / var(total))` with `n - 1` variances.
pub fn cronbach_alpha(m: &ResponseMatrix) -> Result<f64> {
    cronbach_alpha_with(m, VarianceDivisor::Sample)
}

pub fn cronbach_alpha_with(m: &ResponseMatrix, divisor: VarianceDivisor) -> Result<f64> {
    let k = m.item_count();
    if k < 2 {
        return Err(Error::InvalidMatrix("alpha needs at least 2 items".into()));
    }
    let total_var = variance(&m.row_sums(), divisor);
    if total_var == 0.0 {
        return Err(Error::ZeroTotalVariance);
    }
    let item_var: f64 = (0..k).map(|j| variance(&m.column(j), divisor)).sum();
    let k = k as f64;
    Ok(k / (k - 1.0) * (1.0 - item_var / total_var))
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("matrix must be square".into()));
        }
        Ok(Matrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self[(i, j)].powi(2);
                }
            }
        }
        s.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Pearson correlations between items.
pub fn correlation_matrix(m: &ResponseMatrix) -> Result<Matrix> {
    let k = m.item_count();
    let centered: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let col = m.column(j);
            let mu = mean(&col);
            col.into_iter().map(|x| x - mu).collect()
        })
        .collect();
    let ss: Vec<f64> = centered
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum())
        .collect();
    if let Some(j) = ss.iter().position(|&s| s == 0.0) {
        return Err(Error::ZeroVarianceItem(m.items()[j].clone()));
    }
    let mut r = Matrix::identity(k);
    for a in 0..k {
        for b in (a + 1)..k {
            let cov: f64 = centered[a]
                .iter()
                .zip(&centered[b])
                .map(|(x, y)| x * y)
                .sum();
            let v = (cov / (ss[a] * ss[b]).sqrt()).clamp(-1.0, 1.0);
            r[(a, b)] = v;
            r[(b, a)] = v;
        }
    }
    Ok(r)
}

/// Jacobi stopping threshold on the off-diagonal Frobenius norm.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (unsorted, diagonal order) and eigenvectors (columns of the
/// accumulated rotation) by cyclic Jacobi rotations.
pub fn jacobi_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.size();
    for i in 0..n {
        for j in (i + 1)..n {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-10 {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() < JACOBI_TOLERANCE {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[(i, i)]).collect(), v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub retained: Vec<f64>,
    /// `(component number, eigenvalue)`, 1-based.
    pub scree: Vec<(usize, f64)>,
}

impl EigenReport {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let scree = eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &l)| (i + 1, l))
            .collect();
        let retained = eigenvalues.iter().copied().filter(|&l| l > 1.0).collect();
        EigenReport {
            eigenvalues,
            retained,
            scree,
        }
    }
}

pub fn eigenvalues_symmetric(a: &Matrix) -> Result<EigenReport> {
    let (values, _) = jacobi_eigen(a)?;
    Ok(EigenReport::from_eigenvalues(values))
}

/// Kaiser criterion: eigenvalues strictly greater than one.
pub fn kaiser_retained(e: &EigenReport) -> Vec<f64> {
    e.eigenvalues.iter().copied().filter(|&l| l > 1.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub respondents: usize,
    pub items: usize,
    pub alpha: f64,
    pub eigenvalues: Vec<f64>,
    pub retained: Vec<f64>,
    pub retained_count: usize,
    pub scree: Vec<(usize, f64)>,
}

/// Alpha plus the correlation spectrum.
pub fn analyze(m: &ResponseMatrix) -> Result<AnalysisReport> {
    let alpha = cronbach_alpha(m)?;
    let spectrum = eigenvalues_symmetric(&correlation_matrix(m)?)?;
    let retained = kaiser_retained(&spectrum);
    Ok(AnalysisReport {
        respondents: m.respondents(),
        items: m.item_count(),
        alpha,
        retained_count: retained.len(),
        retained,
        eigenvalues: spectrum.eigenvalues,
        scree: spectrum.scree,
    })
}
