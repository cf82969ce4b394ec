//! Dense square inverse stored row-major in one buffer with spare capacity,
//! so bordering and deleting rows and columns never reallocate per row.

#[derive(Debug, Clone, Default)]
pub(crate) struct DenseInverse {
    data: Vec<f64>,
    cap: usize,
    k: usize,
    scratch: Vec<f64>,
    /// When set, the next update also records `row_b . probe` for every row
    /// before modifying it, saving a separate pass over the matrix.
    probe: Vec<f64>,
    probe_armed: bool,
    probed: Vec<f64>,
}

impl DenseInverse {
    pub fn row(&self, b: usize) -> &[f64] {
        let start = b * self.cap;
        &self.data[start..start + self.k]
    }

    fn row_mut(&mut self, b: usize) -> &mut [f64] {
        let start = b * self.cap;
        &mut self.data[start..start + self.k]
    }

    pub fn get(&self, b: usize, a: usize) -> f64 {
        self.data[b * self.cap + a]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.k).map(move |b| self.row(b))
    }

    /// Arms the probe for the next update; `fill` writes the probe vector.
    pub fn set_probe(&mut self, fill: impl FnOnce(&mut Vec<f64>)) {
        self.probe.clear();
        fill(&mut self.probe);
        self.probe_armed = true;
    }

    /// Products recorded by the last probed update, indexed by the row
    /// positions before that update.
    pub fn probed(&self) -> &[f64] {
        &self.probed
    }

    /// Replaces the contents with the `k x k` matrix whose row `b` is
    /// `m[b][offset..offset + k]`.
    pub fn assign(&mut self, k: usize, m: &[Vec<f64>], offset: usize) {
        self.k = 0;
        self.reserve(k);
        self.k = k;
        for (b, src) in m.iter().enumerate() {
            self.row_mut(b).copy_from_slice(&src[offset..offset + k]);
        }
    }

    fn reserve(&mut self, k: usize) {
        if k <= self.cap {
            return;
        }
        let cap = k.max(self.cap + self.cap / 2).max(16);
        let mut data = vec![0.0; cap * cap];
        for b in 0..self.k {
            data[b * cap..b * cap + self.k].copy_from_slice(self.row(b));
        }
        self.data = data;
        self.cap = cap;
    }

    /// Rank-one pass `row_b -= coef(b, row_b) x` over every row except
    /// `skip`, recording probe products of the old rows when armed. `fix`
    /// then sees each row widened to `width` together with its coefficient.
    fn rank_one(
        &mut self,
        x: &[f64],
        skip: Option<usize>,
        width: usize,
        coef: impl Fn(usize, &[f64]) -> f64,
        fix: impl FnMut(usize, &mut [f64], f64),
    ) {
        let armed = std::mem::take(&mut self.probe_armed);
        let mut probed = std::mem::take(&mut self.probed);
        probed.clear();
        let probe = if armed { Some(self.probe.as_slice()) } else { None };
        let pass = RankOne { k: self.k, cap: self.cap, width, x, skip, probe };
        #[cfg(target_arch = "x86_64")]
        if std::is_x86_feature_detected!("avx") {
            // SAFETY: AVX support was just checked.
            unsafe { pass.run_avx(&mut self.data, &mut probed, coef, fix) };
            self.probed = probed;
            return;
        }
        pass.run(&mut self.data, &mut probed, coef, fix);
        self.probed = probed;
    }

    /// Borders the matrix with a new last row and column:
    /// `row_b += (t_b / sigma) srow`, new column `-t / sigma`, new row
    /// `[-srow / sigma, 1 / sigma]`.
    pub fn grow(&mut self, t: &[f64], srow: &[f64], sigma: f64) {
        let k = self.k;
        self.reserve(k + 1);
        self.rank_one(srow, None, k + 1, |b, _| -t[b] / sigma, |_, row, f| row[k] = f);
        let start = k * self.cap;
        let last = &mut self.data[start..start + k + 1];
        for (v, &sv) in last.iter_mut().zip(srow) {
            *v = -sv / sigma;
        }
        last[k] = 1.0 / sigma;
        self.k = k + 1;
    }

    /// Eliminates on entry `(b, a)` and deletes row `b` and column `a`;
    /// the last row and column move into the freed slots.
    pub fn shrink(&mut self, b: usize, a: usize) {
        let piv = self.get(b, a);
        let mut pivot = std::mem::take(&mut self.scratch);
        pivot.clear();
        pivot.extend_from_slice(self.row(b));
        let k = self.k;
        self.rank_one(&pivot, Some(b), k, |_, row| row[a] / piv, |_, _, _| {});
        self.scratch = pivot;
        let last = k - 1;
        if b != last {
            let (src, dst) = (last * self.cap, b * self.cap);
            self.data.copy_within(src..src + k, dst);
        }
        if a != last {
            for r in 0..last {
                let start = r * self.cap;
                self.data[start + a] = self.data[start + last];
            }
        }
        self.k = last;
    }

    /// Column replacement in the underlying matrix: `t` is the new column
    /// expressed through the current inverse, `b` the replaced position.
    pub fn replace_column(&mut self, b: usize, t: &[f64]) {
        let piv = t[b];
        let mut pivot = std::mem::take(&mut self.scratch);
        pivot.clear();
        pivot.extend(self.row(b).iter().map(|v| v / piv));
        let k = self.k;
        self.rank_one(&pivot, Some(b), k, |i, _| t[i], |i, row, _| {
            if i == b {
                row.copy_from_slice(&pivot);
            }
        });
        self.scratch = pivot;
    }

    /// Row replacement in the underlying matrix at position `a`; `srow` is
    /// the new row times the current inverse.
    pub fn replace_row(&mut self, a: usize, srow: &[f64]) {
        let piv = srow[a];
        let k = self.k;
        self.rank_one(srow, None, k, |_, row| row[a] / piv, |_, row, ca| row[a] = ca);
    }
}

struct RankOne<'a> {
    k: usize,
    cap: usize,
    width: usize,
    x: &'a [f64],
    skip: Option<usize>,
    probe: Option<&'a [f64]>,
}

impl RankOne<'_> {
    #[inline(always)]
    fn run(
        &self,
        data: &mut [f64],
        probed: &mut Vec<f64>,
        coef: impl Fn(usize, &[f64]) -> f64,
        mut fix: impl FnMut(usize, &mut [f64], f64),
    ) {
        let k = self.k;
        for b in 0..k {
            let row = &mut data[b * self.cap..b * self.cap + self.width];
            let f = if Some(b) == self.skip { 0.0 } else { coef(b, &row[..k]) };
            match self.probe {
                Some(p) => probed.push(dot_axpy_generic(&mut row[..k], p, -f, self.x)),
                None if f != 0.0 => axpy_generic(&mut row[..k], -f, self.x),
                None => {}
            }
            fix(b, row, f);
        }
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx")]
    unsafe fn run_avx(
        &self,
        data: &mut [f64],
        probed: &mut Vec<f64>,
        coef: impl Fn(usize, &[f64]) -> f64,
        fix: impl FnMut(usize, &mut [f64], f64),
    ) {
        self.run(data, probed, coef, fix)
    }
}

// The two kernels below carry almost all of the simplex work. On x86-64 they
// are compiled a second time with AVX enabled and picked at runtime; both
// builds perform the same operations in the same order, so results do not
// depend on the path taken.

/// `y += alpha x`
pub(crate) fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    #[cfg(target_arch = "x86_64")]
    if std::is_x86_feature_detected!("avx") {
        // SAFETY: AVX support was just checked.
        return unsafe { axpy_avx(y, alpha, x) };
    }
    axpy_generic(y, alpha, x)
}

/// Dot product with independent partial sums.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    #[cfg(target_arch = "x86_64")]
    if std::is_x86_feature_detected!("avx") {
        // SAFETY: AVX support was just checked.
        return unsafe { dot_avx(a, b) };
    }
    dot_generic(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx")]
unsafe fn axpy_avx(y: &mut [f64], alpha: f64, x: &[f64]) {
    axpy_generic(y, alpha, x)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx")]
unsafe fn dot_avx(a: &[f64], b: &[f64]) -> f64 {
    dot_generic(a, b)
}

#[inline(always)]
fn axpy_generic(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (v, &p) in y.iter_mut().zip(x) {
        *v += alpha * p;
    }
}

#[inline(always)]
fn dot_generic(a: &[f64], b: &[f64]) -> f64 {
    const LANES: usize = 16;
    let n = a.len().min(b.len());
    let split = n - n % LANES;
    let mut acc = [0.0f64; LANES];
    for (p, q) in a[..split].chunks_exact(LANES).zip(b[..split].chunks_exact(LANES)) {
        for l in 0..LANES {
            acc[l] += p[l] * q[l];
        }
    }
    let mut width = LANES;
    while width > 1 {
        width /= 2;
        for l in 0..width {
            acc[l] += acc[l + width];
        }
    }
    let tail: f64 = a[split..n].iter().zip(&b[split..n]).map(|(p, q)| p * q).sum();
    acc[0] + tail
}

/// `row . probe` taken before `row += alpha x`, in one sweep.
#[inline(always)]
fn dot_axpy_generic(row: &mut [f64], probe: &[f64], alpha: f64, x: &[f64]) -> f64 {
    const LANES: usize = 16;
    let n = row.len().min(probe.len()).min(x.len());
    let split = n - n % LANES;
    let mut acc = [0.0f64; LANES];
    let (head, tail) = row[..n].split_at_mut(split);
    for ((r, p), q) in head.chunks_exact_mut(LANES).zip(probe[..split].chunks_exact(LANES)).zip(x[..split].chunks_exact(LANES)) {
        for l in 0..LANES {
            acc[l] += r[l] * p[l];
            r[l] += alpha * q[l];
        }
    }
    let mut width = LANES;
    while width > 1 {
        width /= 2;
        for l in 0..width {
            acc[l] += acc[l + width];
        }
    }
    let mut rest = 0.0;
    for ((r, &p), &q) in tail.iter_mut().zip(&probe[split..n]).zip(&x[split..n]) {
        rest += *r * p;
        *r += alpha * q;
    }
    acc[0] + rest
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(inv: &DenseInverse, m: &[Vec<f64>]) -> Vec<Vec<f64>> {
        // inv is indexed [column][row] of the inverse, matching the solver
        let k = inv.rows().count();
        (0..k)
            .map(|b| (0..k).map(|c| (0..k).map(|a| inv.get(b, a) * m[a][c]).sum()).collect())
            .collect()
    }

    fn is_identity(p: &[Vec<f64>]) -> bool {
        p.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &v)| (v - f64::from(u8::from(i == j))).abs() < 1e-12))
    }

    #[test]
    fn grow_then_shrink_tracks_inverse() {
        // K = [[1]] then bordered to [[1,1],[0,1]]
        let mut inv = DenseInverse::default();
        inv.grow(&[], &[], 1.0);
        assert_eq!(inv.row(0), &[1.0]);
        // new row [0], new column [1]: t = K^{-1} [1] = [1], srow = [0] K^{-1} = [0], sigma = 1 - 0
        inv.grow(&[1.0], &[0.0], 1.0);
        let m = vec![vec![1.0, 1.0], vec![0.0, 1.0]];
        assert!(is_identity(&mul(&inv, &m)));
        inv.shrink(0, 0);
        assert_eq!(inv.rows().count(), 1);
        assert!((inv.get(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dot_matches_naive() {
        let a: Vec<f64> = (0..37).map(|i| i as f64 * 0.5).collect();
        let b: Vec<f64> = (0..37).map(|i| 1.0 - i as f64).collect();
        let naive: f64 = a.iter().zip(&b).map(|(p, q)| p * q).sum();
        assert!((dot(&a, &b) - naive).abs() < 1e-12);
    }
}
