//! Embeddings of `Q_n` into the cycle `C_{2^n}` and the path `P_{2^n}`,
//! their wirelength, and the partition paths / type sequences they induce.
//!
//! Host labels are 1-based: an embedding maps vertex index `v` to a label in
//! `1..=2^n`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::cube::{half_plane, theta_half_type, VertexSet, MAX_DIM};
use crate::error::{Error, Result};
use crate::report::{Check, CheckBuilder, Report};

const SAMPLE_N6: &str = include_str!("../data/sample_n6.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Host {
    Cycle,
    Path,
}

impl FromStr for Host {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(Host::Cycle),
            "path" => Ok(Host::Path),
            other => Err(Error::Usage(format!("unknown host {other:?} (cycle|path)"))),
        }
    }
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Host::Cycle => "cycle",
            Host::Path => "path",
        })
    }
}

/// A bijection `V(Q_n) -> {1, ..., 2^n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    n: u32,
    labels: Vec<u32>,
}

/// On-disk form: `map[v]` is the label of vertex `v`, counted from `base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub n: u32,
    pub base: u32,
    pub map: Vec<u64>,
}

impl Embedding {
    /// Builds from 1-based labels.
    pub fn new(n: u32, labels: Vec<u32>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::Usage(format!(
                "dimension n={n} outside 1..={MAX_DIM}"
            )));
        }
        let order = 1usize << n;
        if labels.len() != order {
            return Err(Error::Invalid(format!(
                "embedding of Q_{n} needs {order} labels, got {}",
                labels.len()
            )));
        }
        let mut seen = vec![false; order];
        for (v, &l) in labels.iter().enumerate() {
            if l == 0 || l as usize > order {
                return Err(Error::Invalid(format!(
                    "vertex {v}: label {l} outside 1..={order}"
                )));
            }
            if std::mem::replace(&mut seen[l as usize - 1], true) {
                return Err(Error::Invalid(format!("label {l} used twice")));
            }
        }
        Ok(Embedding { n, labels })
    }

    /// Builds from labels counted from `base` (0 or 1 in practice).
    pub fn from_base(n: u32, base: u32, map: &[u64]) -> Result<Self> {
        let labels = map
            .iter()
            .map(|&l| {
                l.checked_sub(base as u64)
                    .map(|l| l + 1)
                    .filter(|&l| l <= u32::MAX as u64)
                    .map(|l| l as u32)
                    .ok_or_else(|| Error::Invalid(format!("label {l} below base {base}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, labels)
    }

    pub fn from_file(file: &EmbeddingFile) -> Result<Self> {
        Self::from_base(file.n, file.base, &file.map)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: EmbeddingFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn to_file(&self, base: u32) -> EmbeddingFile {
        EmbeddingFile {
            n: self.n,
            base,
            map: self
                .labels
                .iter()
                .map(|&l| l as u64 - 1 + base as u64)
                .collect(),
        }
    }

    /// The non-Gray `Q_6` embedding used for the pipeline figures.
    pub fn sample() -> Self {
        Self::from_json(SAMPLE_N6).expect("bundled sample embedding is valid")
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        1 << self.n
    }

    pub fn label(&self, v: u32) -> u32 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// `inverse()[l - 1]` is the vertex carrying label `l`.
    pub fn inverse(&self) -> Vec<u32> {
        let mut inv = vec![0; self.labels.len()];
        for (v, &l) in self.labels.iter().enumerate() {
            inv[l as usize - 1] = v as u32;
        }
        inv
    }

    /// `η^{-1}({first, ..., first + len - 1})`, labels taken cyclically.
    pub fn preimage(&self, first: u32, len: u32) -> VertexSet {
        let inv = self.inverse();
        let order = self.order();
        let mut s = VertexSet::empty(self.n).expect("dimension checked at construction");
        for l in first..first + len {
            s.insert(inv[((l - 1) % order) as usize]);
        }
        s
    }

    /// Cycle windows `η^{-1}({i, ..., i + 2^{n-1} - 1})` for `i = 1..=2^{n-1}`.
    pub fn cycle_windows(&self) -> Vec<VertexSet> {
        let inv = self.inverse();
        let half = self.order() / 2;
        let mut current = self.preimage(1, half);
        let mut out = Vec::with_capacity(half as usize);
        for i in 1..=half {
            if i > 1 {
                current.remove(inv[(i - 2) as usize]);
                current.insert(inv[(i - 2 + half) as usize]);
            }
            out.push(current.clone());
        }
        out
    }
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding(Q{} -> {:?})", self.n, self.labels)
    }
}

/// The reflected Gray code embedding `ξ_n`: label `(y)_2 + 1` where `y_i` is
/// the parity of `x_1 + ... + x_i`.
pub fn gray_embedding(n: u32) -> Result<Embedding> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Usage(format!(
            "dimension n={n} outside 1..={MAX_DIM}"
        )));
    }
    let labels = (0..(1u32 << n))
        .map(|x| {
            let mut y = x;
            let mut shift = 1;
            while shift < n {
                y ^= y >> shift;
                shift <<= 1;
            }
            y + 1
        })
        .collect();
    Embedding::new(n, labels)
}

fn check_host(eta: &Embedding, host: Host) -> Result<()> {
    if host == Host::Cycle && eta.n < 2 {
        return Err(Error::Domain(
            "cycle wirelength is defined here for n >= 2".into(),
        ));
    }
    Ok(())
}

/// Sum over cube edges of the host distance between the endpoint labels.
pub fn wirelength(eta: &Embedding, host: Host) -> Result<u64> {
    check_host(eta, host)?;
    let order = eta.order();
    let mut total = 0u64;
    for v in 0..order {
        for p in 0..eta.n {
            let w = v ^ (1 << p);
            if w < v {
                continue;
            }
            let d = eta.label(v).abs_diff(eta.label(w));
            total += match host {
                Host::Cycle => d.min(order - d),
                Host::Path => d,
            } as u64;
        }
    }
    Ok(total)
}

/// Wirelength as a sum of edge congestions over the host's cut system.
pub fn wirelength_by_cuts(eta: &Embedding, host: Host) -> Result<u64> {
    check_host(eta, host)?;
    Ok(match host {
        Host::Cycle => eta
            .cycle_windows()
            .iter()
            .map(VertexSet::boundary_size)
            .sum(),
        Host::Path => {
            let inv = eta.inverse();
            let mut prefix = VertexSet::empty(eta.n)?;
            let mut total = 0;
            for &v in &inv[..inv.len() - 1] {
                prefix.insert(v);
                total += prefix.boundary_size();
            }
            total
        }
    })
}

/// `3·2^{2n-3} - 2^{n-1}`, the Gray-code cycle wirelength (`n >= 2`).
pub fn gray_cycle_wirelength(n: u32) -> u64 {
    assert!(n >= 2);
    3 * (1u64 << (2 * n - 3)) - (1u64 << (n - 1))
}

/// `d_D(U, W) = |U Δ W|`.
pub fn set_distance(u: &VertexSet, w: &VertexSet) -> u64 {
    u.symmetric_difference_len(w)
}

/// `F_1, ..., F_{2^{n-1}}`: half-size sets stepping by single swaps from `F_1`
/// towards its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPath {
    n: u32,
    sets: Vec<VertexSet>,
}

impl PartitionPath {
    pub fn new(n: u32, sets: Vec<VertexSet>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::Usage(format!(
                "dimension n={n} outside 1..={MAX_DIM}"
            )));
        }
        let half = 1u64 << (n - 1);
        if sets.len() as u64 != half {
            return Err(Error::Invalid(format!(
                "partition path needs {half} sets, got {}",
                sets.len()
            )));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.dim() != n || s.len() != half {
                return Err(Error::Invalid(format!(
                    "F_{} is not a {half}-subset of Q_{n}",
                    i + 1
                )));
            }
        }
        for i in 0..sets.len() {
            let next = if i + 1 < sets.len() {
                sets[i + 1].clone()
            } else {
                sets[0].complement()
            };
            if set_distance(&sets[i], &next) != 2 {
                return Err(Error::Invalid(format!(
                    "step {} is not a single swap",
                    i + 1
                )));
            }
        }
        let mut sorted: Vec<&[u64]> = sets.iter().map(VertexSet::words).collect();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("partition path revisits a set".into()));
        }
        Ok(PartitionPath { n, sets })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    /// `θ(n, F_1) + ... + θ(n, F_{2^{n-1}})`.
    pub fn weight(&self) -> u64 {
        self.sets.iter().map(VertexSet::boundary_size).sum()
    }
}

/// `F_i = η^{-1}({i, ..., i + 2^{n-1} - 1})`.
pub fn partition_path(eta: &Embedding) -> PartitionPath {
    PartitionPath {
        n: eta.n,
        sets: eta.cycle_windows(),
    }
}

/// Inverse of [`partition_path`]: `F_i \ F_{i+1}` gets label `i` and
/// `F_{i+1} \ F_i` gets label `i + 2^{n-1}`, with `F_{2^{n-1}+1} = F_1^c`.
pub fn embedding_of(path: &PartitionPath) -> Result<Embedding> {
    let n = path.n;
    let half = 1u32 << (n - 1);
    let mut labels = vec![0u32; 1 << n];
    let closing = path.sets[0].complement();
    for (i, cur) in path.sets.iter().enumerate() {
        let next = path.sets.get(i + 1).unwrap_or(&closing);
        let left: Vec<u32> = cur.iter().filter(|&v| !next.contains(v)).collect();
        let entered: Vec<u32> = next.iter().filter(|&v| !cur.contains(v)).collect();
        if left.len() != 1 || entered.len() != 1 {
            return Err(Error::Invalid(format!(
                "step {} is not a single swap",
                i + 1
            )));
        }
        labels[left[0] as usize] = i as u32 + 1;
        labels[entered[0] as usize] = i as u32 + 1 + half;
    }
    Embedding::new(n, labels)
}

/// `(Type(F_1), ..., Type(F_{2^{n-1}}))`, or any sequence of half-plane types
/// manipulated by the lower-bound pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TypeSequence {
    n: u32,
    values: Vec<u64>,
}

impl TypeSequence {
    /// Wraps raw values; entries must lie in `0..=2^{n-2}`.
    pub fn new(n: u32, values: Vec<u64>) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::Usage(format!(
                "type sequences need 2 <= n <= {MAX_DIM}"
            )));
        }
        if values.len() != 1 << (n - 1) {
            return Err(Error::Invalid(format!(
                "type sequence for n={n} needs {} entries, got {}",
                1u64 << (n - 1),
                values.len()
            )));
        }
        if let Some((i, t)) = values.iter().enumerate().find(|(_, &t)| t > 1 << (n - 2)) {
            return Err(Error::Invalid(format!(
                "entry {} = {t} exceeds 2^{}",
                i + 1,
                n - 2
            )));
        }
        Ok(TypeSequence { n, values })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First cyclic position `i` (1-based) with `|t_i - t_{i+1}| > 1`.
    pub fn continuity_break(&self) -> Option<usize> {
        let len = self.values.len();
        (0..len)
            .find(|&i| self.values[i].abs_diff(self.values[(i + 1) % len]) > 1)
            .map(|i| i + 1)
    }

    /// Number of entries at or above `2^{n-3}`.
    pub fn peak_count(&self) -> usize {
        let h = (1u64 << self.n) / 8;
        self.values.iter().filter(|&&t| t >= h.max(1)).count()
    }

    /// Cyclic continuity plus at least two entries `>= 2^{n-3}`.
    pub fn check_continuity_and_peaks(&self) -> Check {
        let name = format!("type sequence n={}: continuity and two peaks", self.n);
        if let Some(i) = self.continuity_break() {
            return Check::fail(name, 1, format!("jump at position {i}: {:?}", self.values));
        }
        if self.n >= 3 && self.peak_count() < 2 {
            return Check::fail(name, 1, format!("fewer than two peaks: {:?}", self.values));
        }
        Check::pass(name, 1)
    }

    /// Two-column CSV `i,t_i` with 1-based `i`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "i,t_i")?;
        for (i, t) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, t)?;
        }
        Ok(())
    }
}

pub fn type_sequence(path: &PartitionPath) -> TypeSequence {
    TypeSequence {
        n: path.n,
        values: path.sets.iter().map(VertexSet::type_of).collect(),
    }
}

/// Type sequence of the cycle windows of `η`, for `n >= 2`.
pub fn type_sequence_of(eta: &Embedding) -> Result<TypeSequence> {
    if eta.n < 2 {
        return Err(Error::Domain("type sequences need n >= 2".into()));
    }
    Ok(type_sequence(&partition_path(eta)))
}

/// The closed-form Gray type sequence: a triangle wave `0, 1, ..., 2^{n-3},
/// ..., 0, ..., 2^{n-3}, ..., 1` of period `2^{n-2}`.
pub fn gray_type_formula(n: u32) -> Vec<u64> {
    assert!(n >= 3);
    let h = 1u64 << (n - 3);
    (0..(1u64 << (n - 1)))
        .map(|j| {
            let r = j % (2 * h);
            r.min(2 * h - r)
        })
        .collect()
}

/// Checks the Gray partition path: its type sequence, `θ(n, G_i) =
/// θ(n, 2^{n-1}, Type(G_i))`, the half-plane images, and the cycle wirelength.
pub fn gray_identities_check(n: u32) -> Result<Report> {
    if !(3..=12).contains(&n) {
        return Err(Error::Usage(format!(
            "gray identity check needs 3 <= n <= 12, got {n}"
        )));
    }
    let xi = gray_embedding(n)?;
    let path = partition_path(&xi);
    let types = type_sequence(&path);
    let mut report = Report::new();

    let expected = gray_type_formula(n);
    let mut seq = CheckBuilder::new(format!("n={n}: Gray type sequence is the triangle wave"));
    for (i, (&got, &want)) in types.values().iter().zip(&expected).enumerate() {
        seq.record(got == want, || format!("i={} got {got} want {want}", i + 1));
    }
    report.push(seq.finish());

    let mut theta = CheckBuilder::new(format!("n={n}: theta(G_i) = theta(n,2^(n-1),Type(G_i))"));
    for (i, g) in path.sets().iter().enumerate() {
        let t = types.values()[i];
        let b = g.boundary_size();
        let closed = theta_half_type(n, t);
        theta.record(closed.as_ref().is_ok_and(|&c| c == b), || {
            format!("i={} boundary {b} vs {closed:?}", i + 1)
        });
    }
    report.push(theta.finish());

    let order = 1u32 << n;
    let (half, quarter) = (order / 2, order / 4);
    let images: [(u32, u8, Vec<u32>); 4] = [
        (1, 0, (1..=half).collect()),
        (1, 1, (half + 1..=order).collect()),
        (
            2,
            0,
            (1..=quarter).chain(order - quarter + 1..=order).collect(),
        ),
        (2, 1, (quarter + 1..=order - quarter).collect()),
    ];
    let mut img = CheckBuilder::new(format!("n={n}: Gray images of H_(n,1,*) and H_(n,2,*)"));
    for (axis, bit, want) in images {
        let h = half_plane(n, axis, bit)?;
        let mut got: Vec<u32> = h.iter().map(|v| xi.label(v)).collect();
        got.sort_unstable();
        img.record(got == want, || format!("H_({n},{axis},{bit})"));
    }
    report.push(img.finish());

    let wl = wirelength(&xi, Host::Cycle)?;
    let formula = gray_cycle_wirelength(n);
    report.push(if wl == formula {
        Check::pass(format!("n={n}: WL(xi_n) = 3*2^(2n-3) - 2^(n-1)"), 1)
    } else {
        Check::fail(
            format!("n={n}: WL(xi_n) = 3*2^(2n-3) - 2^(n-1)"),
            1,
            format!("{wl} vs {formula}"),
        )
    });
    Ok(report)
}
