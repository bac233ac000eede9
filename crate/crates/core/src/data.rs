//! Problem instances: the sparse design matrix, the response, the noise level
//! `rho`, LIBSVM text I/O and a reproducible synthetic generator.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::norm2;
use crate::{Error, Result};

/// Compressed sparse column matrix.
///
/// Column access dominates in the solvers (reduced problems and sieving both
/// slice columns by index), so storage is column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from per-column `(row, value)` lists.
    ///
    /// Row indices must be strictly increasing within a column and lie in
    /// `[0, rows)`; values must be finite. Explicit zeros are dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for (j, col) in columns.into_iter().enumerate() {
            let mut last: Option<usize> = None;
            for (i, v) in col {
                if i >= rows {
                    return Err(Error::InvalidParameter(format!(
                        "row index {i} out of range in column {j} (rows = {rows})"
                    )));
                }
                if last.is_some_and(|l| i <= l) {
                    return Err(Error::InvalidParameter(format!(
                        "row indices not strictly increasing in column {j}"
                    )));
                }
                if !v.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "non-finite value at ({i}, {j})"
                    )));
                }
                last = Some(i);
                if v != 0.0 {
                    row_idx.push(i);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        Ok(SparseMatrix {
            rows,
            cols,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds a matrix from dense rows.
    pub fn from_dense(dense_rows: &[Vec<f64>]) -> Result<Self> {
        let rows = dense_rows.len();
        let cols = dense_rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::new(); cols];
        for (i, row) in dense_rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    columns[j].push((i, v));
                }
            }
        }
        Self::from_columns(rows, columns)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let columns = d.iter().enumerate().map(|(i, &v)| vec![(i, v)]).collect();
        Self::from_columns(d.len(), columns).expect("diagonal matrix is valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row indices and values of column `j`.
    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.col_ptr[j], self.col_ptr[j + 1]);
        (&self.row_idx[s..e], &self.values[s..e])
    }

    /// `⟨A_{:j}, y⟩`
    #[inline]
    pub fn col_dot(&self, j: usize, y: &[f64]) -> f64 {
        let (idx, val) = self.column(j);
        idx.iter().zip(val).map(|(&i, &v)| v * y[i]).sum()
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out = vec![0.0; self.rows];
        self.matvec_into(x, &mut out);
        Ok(out)
    }

    pub fn rmatvec(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: y.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        self.rmatvec_into(y, &mut out);
        Ok(out)
    }

    /// `out ← A x`; lengths are the caller's responsibility.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            let (idx, val) = self.column(j);
            for (&i, &v) in idx.iter().zip(val) {
                out[i] += v * xj;
            }
        }
    }

    /// `out ← Aᵀ y`; lengths are the caller's responsibility.
    pub fn rmatvec_into(&self, y: &[f64], out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.col_dot(j, y);
        }
    }

    /// The submatrix `A_{:idx}` with columns in the order given.
    pub fn select_columns(&self, idx: &[usize]) -> SparseMatrix {
        let mut col_ptr = Vec::with_capacity(idx.len() + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for &j in idx {
            let (ri, v) = self.column(j);
            row_idx.extend_from_slice(ri);
            values.extend_from_slice(v);
            col_ptr.push(row_idx.len());
        }
        SparseMatrix {
            rows: self.rows,
            cols: idx.len(),
            col_ptr,
            row_idx,
            values,
        }
    }

    /// Dense row-major copy, for tests and small diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.cols]; self.rows];
        for j in 0..self.cols {
            let (idx, val) = self.column(j);
            for (&i, &v) in idx.iter().zip(val) {
                d[i][j] = v;
            }
        }
        d
    }

    /// Estimate of `‖A‖₂²` (the Lipschitz constant of `x ↦ Aᵀ(Ax − b)`) by
    /// power iteration on `AᵀA`, scaled by `safety`.
    pub fn lipschitz_estimate(&self, iters: usize, safety: f64) -> f64 {
        if self.cols == 0 || self.nnz() == 0 {
            return 0.0;
        }
        let mut v = vec![1.0 / (self.cols as f64).sqrt(); self.cols];
        let mut av = vec![0.0; self.rows];
        let mut w = vec![0.0; self.cols];
        let mut est = 0.0;
        for _ in 0..iters {
            self.matvec_into(&v, &mut av);
            self.rmatvec_into(&av, &mut w);
            let nw = norm2(&w);
            if nw == 0.0 {
                break;
            }
            est = nw;
            w.iter().zip(v.iter_mut()).for_each(|(a, b)| *b = a / nw);
        }
        // Rayleigh quotient of the last normalized iterate is never above the
        // true top eigenvalue; take the larger of the two estimates.
        self.matvec_into(&v, &mut av);
        let rq = crate::linalg::dot(&av, &av);
        safety * est.max(rq)
    }
}

/// Borrowed view of the least-squares part `½‖Ax − b‖²`.
#[derive(Debug, Clone, Copy)]
pub struct LeastSquares<'a> {
    pub a: &'a SparseMatrix,
    pub b: &'a [f64],
}

impl<'a> LeastSquares<'a> {
    pub fn new(a: &'a SparseMatrix, b: &'a [f64]) -> Self {
        LeastSquares { a, b }
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// `b − Ax`
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m()];
        self.a.matvec_into(x, &mut y);
        y.iter_mut().zip(self.b).for_each(|(v, bi)| *v = bi - *v);
        y
    }

    /// `(b − Ax, Aᵀ(Ax − b))`
    pub fn residual_and_gradient(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let y = self.residual(x);
        let mut g = vec![0.0; self.n()];
        self.a.rmatvec_into(&y, &mut g);
        g.iter_mut().for_each(|v| *v = -*v);
        (y, g)
    }
}

/// A design matrix and response without the noise level: the content of a
/// LIBSVM file or a synthetic draw.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub a: SparseMatrix,
    pub b: Vec<f64>,
}

impl Dataset {
    pub fn new(a: SparseMatrix, b: Vec<f64>) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        Ok(Dataset { a, b })
    }

    pub fn ls(&self) -> LeastSquares<'_> {
        LeastSquares::new(&self.a, &self.b)
    }

    /// Attaches `rho`, validating `0 < rho < ‖b‖`.
    pub fn with_rho(self, rho: f64) -> Result<ProblemData> {
        ProblemData::new(self.a, self.b, rho)
    }

    /// Attaches `rho = c ‖b‖`.
    pub fn with_ratio(self, c: f64) -> Result<ProblemData> {
        let rho = c * norm2(&self.b);
        self.with_rho(rho)
    }
}

/// A complete instance of `min p(x) s.t. ‖Ax − b‖ ≤ rho`.
#[derive(Debug, Clone)]
pub struct ProblemData {
    pub a: SparseMatrix,
    pub b: Vec<f64>,
    pub rho: f64,
    pub bnorm: f64,
}

impl ProblemData {
    pub fn new(a: SparseMatrix, b: Vec<f64>, rho: f64) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        let bnorm = norm2(&b);
        if bnorm == 0.0 {
            return Err(Error::InvalidParameter("b must have a nonzero entry".into()));
        }
        if !(rho > 0.0 && rho < bnorm) {
            return Err(Error::InvalidRho { rho, bnorm });
        }
        Ok(ProblemData { a, b, rho, bnorm })
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Same data, different `rho`.
    pub fn with_rho(&self, rho: f64) -> Result<ProblemData> {
        ProblemData::new(self.a.clone(), self.b.clone(), rho)
    }

    pub fn ls(&self) -> LeastSquares<'_> {
        LeastSquares::new(&self.a, &self.b)
    }

    /// `b − Ax`
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.ls().residual(x)
    }
}

/// Parses LIBSVM text: one `label idx:val idx:val ...` row per line with
/// 1-based, strictly increasing feature indices. Labels become `b` unchanged.
pub fn parse_libsvm(text: &str) -> Result<Dataset> {
    let mut labels = Vec::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    let mut n = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = labels.len();
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line has a token");
        let label: f64 = label_tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("bad label {label_tok:?}"),
        })?;
        let mut last = 0usize;
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("expected idx:val, got {tok:?}"),
            })?;
            let idx: usize = idx.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad index {idx:?}"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "indices are 1-based; found 0".into(),
                });
            }
            if idx <= last {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("index {idx} not strictly increasing (previous {last})"),
                });
            }
            let val: f64 = val.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad value {val:?}"),
            })?;
            if !val.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("non-finite value {val}"),
                });
            }
            last = idx;
            n = n.max(idx);
            entries.push((row, idx - 1, val));
        }
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::NoRows);
    }
    let mut columns = vec![Vec::new(); n];
    // Rows are visited in order, so per-column row indices come out sorted.
    for (i, j, v) in entries {
        columns[j].push((i, v));
    }
    let a = SparseMatrix::from_columns(labels.len(), columns)?;
    Dataset::new(a, labels)
}

pub fn libsvm_read(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_libsvm(&text)
}

/// Formats a dataset as LIBSVM text. Values use the shortest decimal that
/// round-trips to the same `f64`.
pub fn format_libsvm(data: &Dataset) -> String {
    let a = &data.a;
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); a.rows()];
    for j in 0..a.cols() {
        let (idx, val) = a.column(j);
        for (&i, &v) in idx.iter().zip(val) {
            rows[i].push((j, v));
        }
    }
    let mut out = String::new();
    for (label, row) in data.b.iter().zip(&rows) {
        write!(out, "{label}").unwrap();
        for &(j, v) in row {
            write!(out, " {}:{}", j + 1, v).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn libsvm_write(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(format_libsvm(data).as_bytes())
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Parameters of a synthetic sparse-regression instance.
///
/// Generation scheme, in draw order from a ChaCha8 stream seeded by `seed`:
/// 1. `A`: column by column, `m` standard normals, scaled to unit l2 norm;
/// 2. support of the ground truth: `s` distinct indices drawn uniformly;
/// 3. for each support index (ascending): a sign (`±1` with equal odds), then
///    a magnitude uniform on `[0.5, 1.5]`;
/// 4. noise: `m` standard normals scaled by `sigma`.
///
/// `b = A x_true + noise`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub sigma: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(m: usize, n: usize, s: usize, sigma: f64, seed: u64) -> Self {
        SynthSpec {
            m,
            n,
            s,
            sigma,
            seed,
        }
    }
}

pub fn synth_instance(spec: &SynthSpec) -> Result<(Dataset, Vec<f64>)> {
    let SynthSpec {
        m,
        n,
        s,
        sigma,
        seed,
    } = *spec;
    if s > n {
        return Err(Error::InvalidParameter(format!(
            "support size s = {s} exceeds n = {n}"
        )));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} must be >= 0")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n {
        let mut col: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let nc = norm2(&col);
        if nc > 0.0 {
            col.iter_mut().for_each(|v| *v /= nc);
        }
        columns.push(col.into_iter().enumerate().collect::<Vec<_>>());
    }
    let a = SparseMatrix::from_columns(m, columns)?;

    let mut support = index::sample(&mut rng, n, s).into_vec();
    support.sort_unstable();
    let mut x_true = vec![0.0; n];
    for &j in &support {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let mag: f64 = rng.random_range(0.5..=1.5);
        x_true[j] = sign * mag;
    }

    let mut b = a.matvec(&x_true)?;
    if sigma > 0.0 {
        for bi in b.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *bi += sigma * z;
        }
    }
    Ok((Dataset::new(a, b)?, x_true))
}
