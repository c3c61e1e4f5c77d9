//! Ridge extraction from a TFC volume: quantile selection, Gaussian-kernel
//! spectral embedding, k-means, and per-frame aggregation into curves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::par;
use crate::reassign::Squeezed;
use crate::transform::{TfMatrix, TfcTensor};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgeParams {
    /// Entries strictly above this quantile of `|S|` are kept.
    pub quantile: f64,
    /// Kernel bandwidth as a percentile (0..100) of pairwise distances.
    pub sigma_pct: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Cap on the number of selected points; the strongest are kept.
    pub max_points: usize,
    /// Frames ignored at each end of the record (see
    /// [`WindowBank::edge_frames`](crate::window::WindowBank::edge_frames)).
    pub edge_frames: usize,
    /// Project embedding rows onto the unit sphere before k-means. Points of
    /// one component then share a direction even when a slowly varying
    /// eigenvector spreads them along the line.
    pub normalize_rows: bool,
    pub aggregate: Aggregate,
    pub axis_scaling: AxisScaling,
    /// Points whose distance to their `outlier_neighbors`-th nearest
    /// neighbour exceeds this multiple of the median such distance are
    /// dropped before embedding. Zero disables the filter.
    pub outlier_factor: f64,
    pub outlier_neighbors: usize,
}

/// How each coordinate is mapped before distances are taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisScaling {
    /// Minimum to 0, maximum to 1.
    MinMax,
    /// The `p` and `1 - p` quantiles go to 0 and 1, so a few stray points
    /// cannot compress the axis.
    Percentile(f64),
}

/// How one cluster's points at a frame become a single ridge value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregate {
    /// `|S|`-weighted mean of the refined coordinates.
    #[default]
    Centroid,
    /// Refined coordinates of the strongest point.
    Peak,
}

impl Default for RidgeParams {
    fn default() -> Self {
        Self {
            quantile: 0.9995,
            sigma_pct: 15.0,
            restarts: 50,
            seed: 0,
            max_points: 4000,
            edge_frames: 0,
            normalize_rows: true,
            aggregate: Aggregate::Centroid,
            axis_scaling: AxisScaling::Percentile(0.05),
            outlier_factor: 3.0,
            outlier_neighbors: 10,
        }
    }
}

/// Flat index range of the frames left after dropping `edge` at each end.
fn inner_range(n_frames: usize, edge: usize, per_frame: usize) -> std::ops::Range<usize> {
    if 2 * edge >= n_frames {
        return 0..0;
    }
    edge * per_frame..(n_frames - edge) * per_frame
}

/// Quantile with linear interpolation between order statistics, computed by
/// selection. `values` is reordered.
pub fn quantile(values: &mut [f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty set");
    let q = q.clamp(0.0, 1.0);
    let pos = q * (values.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    let (_, &mut a, rest) = values.select_nth_unstable_by(lo, |x, y| x.total_cmp(y));
    if frac == 0.0 || rest.is_empty() {
        return a;
    }
    let b = rest.iter().copied().fold(f64::INFINITY, f64::min);
    a + frac * (b - a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudPoint {
    pub frame: usize,
    pub chirp_row: usize,
    pub freq_bin: usize,
    pub t_s: f64,
    /// Bin-center coordinates.
    pub freq_hz: f64,
    pub chirp_hzps: f64,
    /// Sub-bin coordinates from the squeeze, or the bin center.
    pub refined_freq_hz: f64,
    pub refined_chirp_hzps: f64,
    pub weight: f64,
}

/// Per-axis affine map `(x - offset) / scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisMap {
    pub offset: f64,
    pub scale: f64,
}

impl AxisMap {
    fn fit(vals: impl Iterator<Item = f64>) -> Self {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let span = hi - lo;
        Self { offset: lo, scale: if span > 0.0 { span } else { 1.0 } }
    }

    fn fit_with(vals: &[f64], scaling: AxisScaling) -> Self {
        match scaling {
            AxisScaling::Percentile(p) if p > 0.0 && p < 0.5 && !vals.is_empty() => {
                let mut v = vals.to_vec();
                let lo = quantile(&mut v, p);
                let hi = quantile(&mut v, 1.0 - p);
                if hi > lo {
                    Self { offset: lo, scale: hi - lo }
                } else {
                    Self::fit(vals.iter().copied())
                }
            }
            _ => Self::fit(vals.iter().copied()),
        }
    }

    pub fn apply(&self, v: f64) -> f64 {
        (v - self.offset) / self.scale
    }
}

fn fit_axes(points: &[CloudPoint], scaling: AxisScaling) -> [AxisMap; 3] {
    let col = |f: fn(&CloudPoint) -> f64| points.iter().map(f).collect::<Vec<_>>();
    [
        AxisMap::fit_with(&col(|p| p.t_s), scaling),
        AxisMap::fit_with(&col(|p| p.freq_hz), scaling),
        AxisMap::fit_with(&col(|p| p.chirp_hzps), scaling),
    ]
}

/// Distance from each point to its `k`-th nearest other point.
pub fn knn_distance(points: &[[f64; 3]], k: usize) -> Vec<f64> {
    let n = points.len();
    if n < 2 || k == 0 {
        return vec![0.0; n];
    }
    let k = k.min(n - 1);
    par::map_range(n, |i| {
        let mut d: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| dist2(&points[i], &points[j])).collect();
        let (_, v, _) = d.select_nth_unstable_by(k - 1, |a, b| a.total_cmp(b));
        v.sqrt()
    })
}

/// Fits the axis maps and, if enabled, drops isolated points and refits.
fn finish_cloud(mut points: Vec<CloudPoint>, params: &RidgeParams, n_time: usize, threshold: f64) -> Result<TfcPointCloud> {
    let mut axes = fit_axes(&points, params.axis_scaling);
    let mut removed = 0;
    if params.outlier_factor > 0.0 && points.len() > params.outlier_neighbors + 1 {
        let cloud = TfcPointCloud { points, axes, n_time, threshold, removed: 0 };
        let kd = knn_distance(&cloud.normalized(), params.outlier_neighbors);
        let cut = params.outlier_factor * quantile(&mut kd.clone(), 0.5);
        let before = cloud.points.len();
        points = cloud.points.into_iter().zip(&kd).filter(|(_, &d)| d <= cut).map(|(p, _)| p).collect();
        removed = before - points.len();
        axes = fit_axes(&points, params.axis_scaling);
    }
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(TfcPointCloud { points, axes, n_time, threshold, removed })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfcPointCloud {
    pub points: Vec<CloudPoint>,
    /// Maps for time, frequency and chirp rate.
    pub axes: [AxisMap; 3],
    pub n_time: usize,
    pub threshold: f64,
    /// Points dropped by the outlier filter.
    pub removed: usize,
}

impl TfcPointCloud {
    /// Points in normalized `(t, freq, chirp)` coordinates.
    pub fn normalized(&self) -> Vec<[f64; 3]> {
        self.points
            .iter()
            .map(|p| [self.axes[0].apply(p.t_s), self.axes[1].apply(p.freq_hz), self.axes[2].apply(p.chirp_hzps)])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Entries with `|S|` above the `q`-quantile of all entries. With `q = 0`
/// every nonzero entry is kept.
pub fn select_high_energy(s: &TfcTensor, refined: Option<&Squeezed>, params: &RidgeParams) -> Result<TfcPointCloud> {
    let q = params.quantile;
    if !(0.0..1.0).contains(&q) {
        return param(format!("quantile must lie in [0, 1), got {q}"));
    }
    let mags: Vec<f64> = s.as_slice().iter().map(|z| z.norm()).collect();
    let per_frame = s.grid.n_chirp() * s.grid.n_freq();
    let inner = inner_range(mags.len() / per_frame.max(1), params.edge_frames, per_frame);
    if inner.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let thr = quantile(&mut mags[inner.clone()].to_vec(), q);
    let keep = |m: f64| m > 0.0 && (m > thr || (q == 0.0 && m >= thr));
    let mut idx: Vec<usize> = inner.filter(|&i| keep(mags[i])).collect();
    if idx.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if idx.len() > params.max_points {
        idx.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
        idx.truncate(params.max_points);
        idx.sort_unstable();
    }
    let g = s.grid;
    let (nc, nf) = (g.n_chirp(), g.n_freq());
    let points: Vec<CloudPoint> = idx
        .iter()
        .map(|&i| {
            let n = i / (nc * nf);
            let c = (i / nf) % nc;
            let j = i % nf;
            let (freq_hz, chirp_hzps) = (g.freq_hz(j), g.chirp_hzps(c));
            let (rf, rc) = refined.and_then(|r| r.refined(c, j, n)).unwrap_or((freq_hz, chirp_hzps));
            CloudPoint {
                frame: n,
                chirp_row: c,
                freq_bin: j,
                t_s: s.time_s(n),
                freq_hz,
                chirp_hzps,
                refined_freq_hz: rf,
                refined_chirp_hzps: rc,
                weight: mags[i],
            }
        })
        .collect();
    finish_cloud(points, params, g.n_time, thr)
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

/// Gaussian affinity `W` (row-major, diagonal included) and its bandwidth.
pub fn affinity(points: &[[f64; 3]], sigma_pct: f64) -> Result<(Vec<f64>, f64)> {
    let n = points.len();
    if n < 2 {
        return Err(Error::DegenerateCloud("fewer than two points".into()));
    }
    if !(0.0..=100.0).contains(&sigma_pct) {
        return param(format!("sigma percentile must lie in [0, 100], got {sigma_pct}"));
    }
    let mut d: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            d.push(dist2(&points[i], &points[j]).sqrt());
        }
    }
    let sigma = quantile(&mut d, sigma_pct / 100.0);
    if !(sigma > 0.0) {
        return Err(Error::DegenerateCloud("kernel bandwidth is zero".into()));
    }
    let inv = 1.0 / (2.0 * sigma * sigma);
    let rows = par::map_range(n, |i| (0..n).map(|j| (-dist2(&points[i], &points[j]) * inv).exp()).collect::<Vec<_>>());
    Ok((rows.concat(), sigma))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// One row of `2(K-1)` coordinates per point.
    pub coords: Vec<Vec<f64>>,
    /// Eigenvalues of `D^-1 W` in descending order, the trivial one first.
    pub eigenvalues: Vec<f64>,
    pub sigma: f64,
}

/// Embedding by the leading nontrivial eigenvectors of `D^-1 W`, computed
/// through the symmetric matrix `D^-1/2 W D^-1/2`.
pub fn spectral_embed(cloud: &TfcPointCloud, sigma_pct: f64, k: usize) -> Result<Embedding> {
    spectral_embed_points(&cloud.normalized(), sigma_pct, k)
}

pub fn spectral_embed_points(points: &[[f64; 3]], sigma_pct: f64, k: usize) -> Result<Embedding> {
    if k < 2 {
        return param("spectral embedding needs K >= 2");
    }
    let n = points.len();
    let dim = 2 * (k - 1);
    if n < dim + 1 {
        return param(format!("{n} points cannot be embedded in {dim} dimensions"));
    }
    let (w, sigma) = affinity(points, sigma_pct)?;
    let deg: Vec<f64> = (0..n).map(|i| w[i * n..(i + 1) * n].iter().sum()).collect();
    let dinv: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let sym = faer::Mat::<f64>::from_fn(n, n, |i, j| dinv[i] * w[i * n + j] * dinv[j]);
    let evd = sym.selfadjoint_eigendecomposition(faer::Side::Lower);
    let vals = evd.s().column_vector();
    let u = evd.u();
    // Ascending order; the last column is the trivial eigenvector.
    let eigenvalues: Vec<f64> = (0..n).rev().map(|i| vals.read(i)).collect();
    let mut coords = vec![vec![0.0; dim]; n];
    for e in 0..dim {
        let col = n - 2 - e;
        let mut psi: Vec<f64> = (0..n).map(|i| u.read(i, col) * dinv[i]).collect();
        let pivot = (0..n).fold(0, |b, i| if psi[i].abs() > psi[b].abs() { i } else { b });
        if psi[pivot] < 0.0 {
            psi.iter_mut().for_each(|v| *v = -*v);
        }
        for i in 0..n {
            coords[i][e] = psi[i];
        }
    }
    Ok(Embedding { coords, eigenvalues, sigma })
}

/// Sum of squared distances to cluster means.
pub fn inertia(data: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let dim = data.first().map_or(0, |r| r.len());
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (x, &l) in data.iter().zip(labels) {
        counts[l] += 1;
        for (s, v) in sums[l].iter_mut().zip(x) {
            *s += v;
        }
    }
    data.iter()
        .zip(labels)
        .map(|(x, &l)| {
            let c = counts[l] as f64;
            x.iter().zip(&sums[l]).map(|(v, s)| (v - s / c).powi(2)).sum::<f64>()
        })
        .sum()
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn kmeans_once(data: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, f64) {
    let n = data.len();
    let mut centers: Vec<Vec<f64>> = vec![data[rng.gen_range(0..n)].clone()];
    let mut d2: Vec<f64> = data.iter().map(|x| sq(x, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut r = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if r < d {
                    pick = i;
                    break;
                }
                r -= d;
            }
            pick
        } else {
            rng.gen_range(0..n)
        };
        centers.push(data[next].clone());
        for (i, x) in data.iter().enumerate() {
            d2[i] = d2[i].min(sq(x, &centers[centers.len() - 1]));
        }
    }
    let mut labels = vec![usize::MAX; n];
    for _ in 0..300 {
        let mut changed = false;
        for (i, x) in data.iter().enumerate() {
            let best = (0..k).fold(0, |b, c| if sq(x, &centers[c]) < sq(x, &centers[b]) { c } else { b });
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let dim = data[0].len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (x, &l) in data.iter().zip(&labels) {
            counts[l] += 1;
            for (s, v) in sums[l].iter_mut().zip(x) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    let inert = inertia(data, &labels, k);
    (labels, inert)
}

/// k-means++ with `restarts` independent runs; the lowest inertia wins.
/// Run `r` draws from stream `r` of a ChaCha8 generator seeded with `seed`.
pub fn kmeans_cluster(data: &[Vec<f64>], k: usize, seed: u64, restarts: usize) -> Result<(Vec<usize>, f64)> {
    if k == 0 {
        return param("K must be at least 1");
    }
    if data.len() < k {
        return param(format!("{} points cannot form {k} clusters", data.len()));
    }
    if k == 1 {
        return Ok((vec![0; data.len()], inertia(data, &vec![0; data.len()], 1)));
    }
    let runs = par::map_range(restarts.max(1), |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        kmeans_once(data, k, &mut rng)
    });
    Ok(runs.into_iter().fold((Vec::new(), f64::INFINITY), |best, run| if run.1 < best.1 { run } else { best }))
}

/// One extracted ridge, total over frames.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeCurve {
    pub omega_hz: Vec<f64>,
    pub mu_hzps: Vec<f64>,
    /// False where the cluster had no points and the value was interpolated.
    pub valid: Vec<bool>,
    /// Per frame, `(frequency Hz, weight)` of the cluster's points.
    pub support: Vec<Vec<(f64, f64)>>,
}

impl RidgeCurve {
    pub fn mean_chirp(&self) -> f64 {
        self.mu_hzps.iter().sum::<f64>() / self.mu_hzps.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RidgeSet {
    pub curves: Vec<RidgeCurve>,
    pub t0_s: f64,
    pub sample_rate_hz: f64,
}

impl RidgeSet {
    pub fn k(&self) -> usize {
        self.curves.len()
    }

    pub fn n_time(&self) -> usize {
        self.curves.first().map_or(0, |c| c.omega_hz.len())
    }

    /// Ridge set from known curves (every frame valid).
    pub fn from_truth(omega: Vec<Vec<f64>>, mu: Vec<Vec<f64>>, t0_s: f64, sample_rate_hz: f64) -> Self {
        let curves = omega
            .into_iter()
            .zip(mu)
            .map(|(o, m)| RidgeCurve {
                valid: vec![true; o.len()],
                support: o.iter().map(|&v| vec![(v, 1.0)]).collect(),
                omega_hz: o,
                mu_hzps: m,
            })
            .collect();
        Self { curves, t0_s, sample_rate_hz }
    }
}

/// Fill invalid entries by linear interpolation between valid neighbors,
/// holding the end values constant.
fn fill_gaps(vals: &mut [f64], valid: &[bool]) {
    let known: Vec<usize> = (0..vals.len()).filter(|&i| valid[i]).collect();
    let (Some(&first), Some(&last)) = (known.first(), known.last()) else { return };
    for i in 0..first {
        vals[i] = vals[first];
    }
    for i in last + 1..vals.len() {
        vals[i] = vals[last];
    }
    for w in known.windows(2) {
        let (a, b) = (w[0], w[1]);
        for i in a + 1..b {
            let f = (i - a) as f64 / (b - a) as f64;
            vals[i] = vals[a] + f * (vals[b] - vals[a]);
        }
    }
}

/// Per frame and cluster, the weighted centroid of refined coordinates;
/// curves come back sorted by ascending mean chirp rate.
pub fn ridges_from_clusters(cloud: &TfcPointCloud, labels: &[usize], k: usize, t0_s: f64, sample_rate_hz: f64) -> Result<RidgeSet> {
    ridges_from_clusters_with(cloud, labels, k, t0_s, sample_rate_hz, Aggregate::Centroid)
}

/// [`ridges_from_clusters`] with an explicit per-frame aggregation rule.
pub fn ridges_from_clusters_with(
    cloud: &TfcPointCloud,
    labels: &[usize],
    k: usize,
    t0_s: f64,
    sample_rate_hz: f64,
    aggregate: Aggregate,
) -> Result<RidgeSet> {
    if labels.len() != cloud.len() {
        return Err(Error::Shape("labels do not cover the cloud".into()));
    }
    let nt = cloud.n_time;
    let mut curves = Vec::with_capacity(k);
    for cl in 0..k {
        let mut wsum = vec![0.0; nt];
        let mut fsum = vec![0.0; nt];
        let mut csum = vec![0.0; nt];
        let mut peak = vec![0.0; nt];
        let mut support = vec![Vec::new(); nt];
        for (p, _) in cloud.points.iter().zip(labels).filter(|(_, &l)| l == cl) {
            let n = p.frame;
            support[n].push((p.refined_freq_hz, p.weight));
            match aggregate {
                Aggregate::Centroid => {
                    wsum[n] += p.weight;
                    fsum[n] += p.weight * p.refined_freq_hz;
                    csum[n] += p.weight * p.refined_chirp_hzps;
                }
                Aggregate::Peak if p.weight > peak[n] => {
                    peak[n] = p.weight;
                    (wsum[n], fsum[n], csum[n]) = (1.0, p.refined_freq_hz, p.refined_chirp_hzps);
                }
                Aggregate::Peak => {}
            }
        }
        let valid: Vec<bool> = wsum.iter().map(|&w| w > 0.0).collect();
        if !valid.iter().any(|&v| v) {
            return Err(Error::Extraction(format!("cluster {cl} has no points")));
        }
        let mut omega: Vec<f64> = (0..nt).map(|n| if valid[n] { fsum[n] / wsum[n] } else { 0.0 }).collect();
        let mut mu: Vec<f64> = (0..nt).map(|n| if valid[n] { csum[n] / wsum[n] } else { 0.0 }).collect();
        fill_gaps(&mut omega, &valid);
        fill_gaps(&mut mu, &valid);
        curves.push(RidgeCurve { omega_hz: omega, mu_hzps: mu, valid, support });
    }
    curves.sort_by(|a, b| a.mean_chirp().total_cmp(&b.mean_chirp()));
    Ok(RidgeSet { curves, t0_s, sample_rate_hz })
}

/// The full pipeline. `K = 1` skips clustering.
pub fn extract_ridges(s: &TfcTensor, refined: Option<&Squeezed>, k: usize, params: &RidgeParams) -> Result<RidgeSet> {
    if k == 0 {
        return param("K must be at least 1");
    }
    let cloud = select_high_energy(s, refined, params)?;
    cluster_cloud(&cloud, k, params, s.t0_s, s.grid.sample_rate_hz)
}

/// Scales each embedding row to unit length (zero rows are left alone).
pub fn normalize_rows(rows: &mut [Vec<f64>]) {
    for r in rows {
        let n = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.0 {
            r.iter_mut().for_each(|v| *v /= n);
        }
    }
}

fn cluster_cloud(cloud: &TfcPointCloud, k: usize, params: &RidgeParams, t0_s: f64, fs: f64) -> Result<RidgeSet> {
    let labels = if k == 1 {
        vec![0; cloud.len()]
    } else {
        let mut emb = spectral_embed(cloud, params.sigma_pct, k)?;
        if params.normalize_rows {
            normalize_rows(&mut emb.coords);
        }
        kmeans_cluster(&emb.coords, k, params.seed, params.restarts)?.0
    };
    ridges_from_clusters_with(cloud, &labels, k, t0_s, fs, params.aggregate)
}

/// Same pipeline on a time-frequency matrix with the chirp coordinate fixed
/// at zero; used for the SST baseline.
pub fn extract_tf_ridges(s: &TfMatrix<Complex64>, k: usize, params: &RidgeParams) -> Result<RidgeSet> {
    extract_tf_ridges_with_chirp(s, None, k, params)
}

/// As [`extract_tf_ridges`], taking each point's chirp coordinate (Hz/s)
/// from `chirp` when given.
pub fn extract_tf_ridges_with_chirp(
    s: &TfMatrix<Complex64>,
    chirp: Option<&TfMatrix<f64>>,
    k: usize,
    params: &RidgeParams,
) -> Result<RidgeSet> {
    if k == 0 {
        return param("K must be at least 1");
    }
    let q = params.quantile;
    if !(0.0..1.0).contains(&q) {
        return param(format!("quantile must lie in [0, 1), got {q}"));
    }
    let g = s.grid;
    let nf = g.n_freq();
    if chirp.is_some_and(|c| c.shape() != s.shape()) {
        return Err(Error::Shape("chirp matrix does not match the TF matrix".into()));
    }
    let mags: Vec<f64> = s.as_slice().iter().map(|z| z.norm()).collect();
    let inner = inner_range(mags.len() / nf.max(1), params.edge_frames, nf);
    if inner.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let thr = quantile(&mut mags[inner.clone()].to_vec(), q);
    let mut idx: Vec<usize> = inner.filter(|&i| mags[i] > 0.0 && (mags[i] > thr || (q == 0.0 && mags[i] >= thr))).collect();
    if idx.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if idx.len() > params.max_points {
        idx.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
        idx.truncate(params.max_points);
        idx.sort_unstable();
    }
    let points: Vec<CloudPoint> = idx
        .iter()
        .map(|&i| {
            let (n, j) = (i / nf, i % nf);
            let f = g.freq_hz(j);
            let mu = chirp.map_or(0.0, |c| c.get(j, n));
            CloudPoint {
                frame: n,
                chirp_row: g.zero_chirp_row(),
                freq_bin: j,
                t_s: g.time_s(n, s.t0_s),
                freq_hz: f,
                chirp_hzps: mu,
                refined_freq_hz: f,
                refined_chirp_hzps: mu,
                weight: mags[i],
            }
        })
        .collect();
    let cloud = finish_cloud(points, params, g.n_time, thr)?;
    cluster_cloud(&cloud, k, params, s.t0_s, g.sample_rate_hz)
}
