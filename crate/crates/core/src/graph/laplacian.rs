use super::WeightedGraph;

/// Symmetric matrix in CSR form, both triangles stored, rows sorted by
/// column. Only touched entries are materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSymmetric {
    pub(crate) fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.sort_by_key(|(c, _)| *c);
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            offsets.push(cols.len());
        }
        Self {
            n,
            offsets,
            cols,
            vals,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
        self.cols[lo..hi]
            .iter()
            .copied()
            .zip(self.vals[lo..hi].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
        match self.cols[lo..hi].binary_search(&j) {
            Ok(k) => self.vals[lo + k],
            Err(_) => 0.0,
        }
    }

    /// `out = M x`.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *o = acc;
        }
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            if x[i] == 0.0 {
                continue;
            }
            let row: f64 = self.row(i).map(|(j, v)| v * x[j]).sum();
            acc += x[i] * row;
        }
        acc
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

    /// Principal submatrix on `keep` (in that order).
    pub fn principal(&self, keep: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in keep.iter().enumerate() {
            local[v] = k;
        }
        let rows = keep
            .iter()
            .map(|&i| {
                self.row(i)
                    .filter(|(j, _)| local[*j] != usize::MAX)
                    .map(|(j, v)| (local[j], v))
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }
}

/// `L = diag(We) − W`.
pub fn build_laplacian(g: &WeightedGraph) -> SparseSymmetric {
    let rows = (0..g.n())
        .map(|i| {
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(g.degree(i) + 1);
            let mut diag = 0.0;
            for (j, w) in g.neighbors(i) {
                diag += w;
                row.push((j, -w));
            }
            if g.degree(i) > 0 {
                row.push((i, diag));
            }
            row
        })
        .collect();
    SparseSymmetric::from_rows(rows)
}
