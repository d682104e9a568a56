/// Symmetric positive-definite matrix in compressed sparse row form.
///
/// Both triangles are stored. Positive definiteness is not checked here; the
/// conjugate gradient solver reports a breakdown if it fails.
/// Sum of products with the rounding errors collected separately
/// (two-product via FMA, two-sum).
struct Compensated {
    sum: f64,
    err: f64,
}

impl Compensated {
    fn new(start: f64) -> Self {
        Compensated { sum: start, err: 0.0 }
    }

    #[inline]
    fn add_product(&mut self, a: f64, x: f64) {
        let p = a * x;
        let p_err = a.mul_add(x, -p);
        let t = self.sum + p;
        let bp = t - self.sum;
        self.err += (self.sum - (t - bp)) + (p - bp) + p_err;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.err
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseSpd {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

impl SparseSpd {
    /// Zero matrix with the given sparsity: `rows[i]` lists the columns of row `i`.
    pub fn with_pattern(rows: &[Vec<usize>]) -> Self {
        let n = rows.len();
        assert!(n <= u32::MAX as usize, "matrix dimension exceeds 32-bit indices");
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let nnz: usize = rows.iter().map(Vec::len).sum();
        let mut col_idx = Vec::with_capacity(nnz);
        for r in rows {
            let mut cols = r.clone();
            cols.sort_unstable();
            cols.dedup();
            col_idx.extend(cols.iter().map(|&c| {
                assert!(c < n, "column {c} out of range");
                c as u32
            }));
            row_ptr.push(col_idx.len());
        }
        let values = vec![0.0; col_idx.len()];
        SparseSpd {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Dense row-major input; zeros are dropped except on the diagonal.
    pub fn from_dense(a: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<usize>> = a
            .iter()
            .enumerate()
            .map(|(i, r)| (0..r.len()).filter(|&j| i == j || r[j] != 0.0).collect())
            .collect();
        let mut m = SparseSpd::with_pattern(&rows);
        for (i, r) in a.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    m.add(i, j, v);
                }
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut m = SparseSpd::with_pattern(&rows);
        m.values.fill(1.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[lo..hi]
            .binary_search(&(j as u32))
            .ok()
            .map(|k| lo + k)
    }

    /// Adds `v` to entry `(i, j)`, which must be in the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .position(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) not in sparsity pattern"));
        self.values[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |k| self.values[k])
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[lo..hi]
            .iter()
            .zip(&self.values[lo..hi])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut s = 0.0;
            for k in lo..hi {
                s += self.values[k] * x[self.col_idx[k] as usize];
            }
            *yi = s;
        }
    }

    /// `y = A x`, returning `xᵀ y`.
    pub fn mul_vec_dot(&self, x: &[f64], y: &mut [f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let mut d = 0.0;
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut s = 0.0;
            for k in lo..hi {
                s += self.values[k] * x[self.col_idx[k] as usize];
            }
            *yi = s;
            d += x[i] * s;
        }
        d
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `r = b − A x`, each row accumulated with error-free transformations so
    /// the result is nearly correctly rounded even under heavy cancellation.
    pub fn residual_into(&self, b: &[f64], x: &[f64], r: &mut [f64]) {
        self.residual_split_into(b, x, None, r);
    }

    /// As [`SparseSpd::residual_into`] for `x = hi + lo` held as an unevaluated sum.
    pub fn residual_split_into(&self, b: &[f64], hi: &[f64], lo: Option<&[f64]>, r: &mut [f64]) {
        assert_eq!(hi.len(), self.n);
        assert_eq!(b.len(), self.n);
        assert_eq!(r.len(), self.n);
        if let Some(lo) = lo {
            assert_eq!(lo.len(), self.n);
        }
        for (i, ri) in r.iter_mut().enumerate() {
            let (start, end) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut acc = Compensated::new(b[i]);
            for k in start..end {
                let a = -self.values[k];
                let j = self.col_idx[k] as usize;
                acc.add_product(a, hi[j]);
                if let Some(lo) = lo {
                    acc.add_product(a, lo[j]);
                }
            }
            *ri = acc.value();
        }
    }

    /// Largest |a_ij - a_ji|.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        d
    }
}
