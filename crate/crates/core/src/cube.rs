//! Vertex sets of the hypercube `Q_n`, half planes, edge boundaries, types
//! and Harper's closed form for the edge-isoperimetric minimum.
//!
//! A vertex `x_1 x_2 ... x_n` is stored as the integer whose binary
//! expansion is that word, `x_1` being the most significant bit. Coordinate
//! (axis) `i` therefore lives at bit position `n - i` of the vertex index.

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported dimension; a set over `Q_24` takes 2 MiB.
pub const MAX_DIM: u32 = 24;

/// `LOW_MASKS[p]` selects, inside one 64-bit word, the vertices whose bit `p`
/// is zero.
const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

fn check_dim(n: u32) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Usage(format!(
            "dimension n={n} outside 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

fn check_axis(n: u32, axis: u32) -> Result<()> {
    if axis == 0 || axis > n {
        return Err(Error::Usage(format!("axis {axis} outside 1..={n}")));
    }
    Ok(())
}

#[inline]
fn word_count(n: u32) -> usize {
    if n <= 6 {
        1
    } else {
        1usize << (n - 6)
    }
}

#[inline]
fn valid_mask(n: u32) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

/// Boundary size of a set in `Q_n` (`n <= 6`) packed in a single word.
#[inline]
pub fn mask_boundary(n: u32, bits: u64) -> u32 {
    let mut total = 0;
    for p in 0..n as usize {
        total += ((bits ^ (bits >> (1u32 << p))) & LOW_MASKS[p]).count_ones();
    }
    total
}

/// Type of a set in `Q_n` (`n <= 6`) packed in a single word with `k` members.
#[inline]
pub fn mask_type(n: u32, bits: u64, k: u32) -> u32 {
    let mut best = k;
    for p in 0..n as usize {
        let upper = (bits & !LOW_MASKS[p]).count_ones();
        best = best.min(upper).min(k - upper);
    }
    best
}

/// A subset of `V(Q_n)` as a `2^n`-bit mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: u32,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: u32) -> Result<Self> {
        check_dim(n)?;
        Ok(VertexSet {
            n,
            words: vec![0; word_count(n)],
        })
    }

    pub fn full(n: u32) -> Result<Self> {
        let mut s = Self::empty(n)?;
        let m = valid_mask(n);
        s.words.iter_mut().for_each(|w| *w = m);
        Ok(s)
    }

    /// Single-word constructor for `n <= 6`. Bits at or above `2^n` are rejected.
    pub fn from_mask(n: u32, bits: u64) -> Result<Self> {
        check_dim(n)?;
        if n > 6 {
            return Err(Error::Usage(format!("from_mask needs n <= 6, got {n}")));
        }
        if bits & !valid_mask(n) != 0 {
            return Err(Error::Invalid(format!(
                "mask {bits:#x} has bits beyond 2^{n}"
            )));
        }
        Ok(VertexSet {
            n,
            words: vec![bits],
        })
    }

    pub fn from_vertices<I: IntoIterator<Item = u32>>(n: u32, vertices: I) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for v in vertices {
            if v as u64 >= s.order() {
                return Err(Error::Invalid(format!("vertex {v} outside Q_{n}")));
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// Number of vertices of the ambient cube, `2^n`.
    pub fn order(&self) -> u64 {
        1u64 << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The packed word when the whole set fits in one (`n <= 6`).
    pub fn as_mask(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        (self.words[(v >> 6) as usize] >> (v & 63)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        self.words[(v >> 6) as usize] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: u32) {
        self.words[(v >> 6) as usize] &= !(1u64 << (v & 63));
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i as u32) << 6;
            BitIter(w).map(move |b| base + b)
        })
    }

    pub fn complement(&self) -> VertexSet {
        let m = valid_mask(self.n);
        VertexSet {
            n: self.n,
            words: self.words.iter().map(|w| !w & m).collect(),
        }
    }

    fn same_cube(&self, other: &VertexSet) {
        assert_eq!(self.n, other.n, "vertex sets from different cubes");
    }

    pub fn symmetric_difference(&self, other: &VertexSet) -> VertexSet {
        self.same_cube(other);
        VertexSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    pub fn symmetric_difference_len(&self, other: &VertexSet) -> u64 {
        self.same_cube(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum()
    }

    pub fn intersection_len(&self, other: &VertexSet) -> u64 {
        self.same_cube(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    /// `|S \ other|`
    pub fn difference_len(&self, other: &VertexSet) -> u64 {
        self.same_cube(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as u64)
            .sum()
    }

    /// Number of members whose bit `p` is one, i.e. `|S ∩ H_{n, n-p, 1}|`.
    fn upper_count(&self, p: u32) -> u64 {
        if p < 6 {
            let hi = !LOW_MASKS[p as usize];
            self.words
                .iter()
                .map(|w| (w & hi).count_ones() as u64)
                .sum()
        } else {
            let stride = 1usize << (p - 6);
            self.words
                .iter()
                .enumerate()
                .filter(|(i, _)| i & stride != 0)
                .map(|(_, w)| w.count_ones() as u64)
                .sum()
        }
    }

    /// `|g^{-1}_{n,i,0}(S) Δ g^{-1}_{n,i,1}(S)|` for the axis at bit `p`,
    /// computed in place without compacting the two halves.
    fn axis_cut(&self, p: u32) -> u64 {
        if p < 6 {
            let lo = LOW_MASKS[p as usize];
            let s = 1u32 << p;
            self.words
                .iter()
                .map(|&w| ((w ^ (w >> s)) & lo).count_ones() as u64)
                .sum()
        } else {
            let stride = 1usize << (p - 6);
            (0..self.words.len())
                .filter(|i| i & stride == 0)
                .map(|i| (self.words[i] ^ self.words[i + stride]).count_ones() as u64)
                .sum()
        }
    }

    /// Edge boundary by visiting every member and each of its `n` neighbours.
    pub fn boundary_size_direct(&self) -> u64 {
        let mut count = 0;
        for v in self.iter() {
            for p in 0..self.n {
                if !self.contains(v ^ (1 << p)) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Edge boundary as the sum over axes of the symmetric difference of the
    /// two projections.
    pub fn boundary_size_multicut(&self) -> u64 {
        (0..self.n).map(|p| self.axis_cut(p)).sum()
    }

    /// `θ(n, S)`: number of cube edges with exactly one end in the set.
    pub fn boundary_size(&self) -> u64 {
        let fast = self.boundary_size_multicut();
        #[cfg(debug_assertions)]
        if self.n <= 10 {
            debug_assert_eq!(fast, self.boundary_size_direct());
        }
        fast
    }

    /// `|S ∩ H|` for the half plane `H_{n,axis,bit}`.
    pub fn half_plane_count(&self, axis: u32, bit: u8) -> Result<u64> {
        check_axis(self.n, axis)?;
        let upper = self.upper_count(self.n - axis);
        Ok(if bit == 0 { self.len() - upper } else { upper })
    }

    /// `Type(S)`: the smallest intersection with any of the `2n` half planes.
    pub fn type_of(&self) -> u64 {
        let k = self.len();
        (0..self.n)
            .map(|p| {
                let upper = self.upper_count(p);
                upper.min(k - upper)
            })
            .min()
            .unwrap_or(0)
    }

    /// Every half plane `(axis, bit)` attaining the type.
    pub fn type_witnesses(&self) -> Vec<(u32, u8)> {
        let t = self.type_of();
        let k = self.len();
        let mut out = Vec::new();
        for axis in 1..=self.n {
            let upper = self.upper_count(self.n - axis);
            if k - upper == t {
                out.push((axis, 0));
            }
            if upper == t {
                out.push((axis, 1));
            }
        }
        out
    }

    /// The projections `(g^{-1}_{n,axis,0}(S), g^{-1}_{n,axis,1}(S))` into `Q_{n-1}`.
    pub fn split_by_axis(&self, axis: u32) -> Result<(VertexSet, VertexSet)> {
        if self.n < 2 {
            return Err(Error::Usage("split_by_axis needs n >= 2".into()));
        }
        check_axis(self.n, axis)?;
        let p = self.n - axis;
        let low = (1u32 << p) - 1;
        let mut s0 = VertexSet::empty(self.n - 1)?;
        let mut s1 = VertexSet::empty(self.n - 1)?;
        for u in 0..(1u32 << (self.n - 1)) {
            let v0 = ((u & !low) << 1) | (u & low);
            if self.contains(v0) {
                s0.insert(u);
            }
            if self.contains(v0 | (1 << p)) {
                s1.insert(u);
            }
        }
        Ok((s0, s1))
    }

    /// Zero-padded big-endian hex of the full `2^n`-bit mask, `0x` prefixed.
    pub fn to_hex(&self) -> String {
        let digits = self.order().div_ceil(4) as usize;
        let mut out = String::with_capacity(digits + 2);
        out.push_str("0x");
        for d in (0..digits).rev() {
            let bit = d * 4;
            let nibble = (self.words[bit >> 6] >> (bit & 63)) & 0xF;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(n: u32, hex: &str) -> Result<Self> {
        let mut s = Self::empty(n)?;
        let body = hex
            .strip_prefix("0x")
            .or_else(|| hex.strip_prefix("0X"))
            .unwrap_or(hex);
        if body.is_empty() {
            return Err(Error::Invalid("empty hex mask".into()));
        }
        for (d, ch) in body.chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::Invalid(format!("bad hex digit {ch:?}")))?
                as u64;
            if nibble == 0 {
                continue;
            }
            let bit = d as u64 * 4;
            if bit >= s.order() {
                return Err(Error::Invalid(format!("mask {hex} has bits beyond 2^{n}")));
            }
            s.words[(bit >> 6) as usize] |= nibble << (bit & 63);
        }
        if s.words[0] & !valid_mask(n) != 0 {
            return Err(Error::Invalid(format!("mask {hex} has bits beyond 2^{n}")));
        }
        Ok(s)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.n as usize;
        let members: Vec<String> = self.iter().map(|v| format!("{v:0width$b}")).collect();
        write!(f, "Q{}{{{}}}", self.n, members.join(","))
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

#[derive(Serialize, Deserialize)]
struct VertexSetRepr {
    n: u32,
    bits: String,
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VertexSetRepr {
            n: self.n,
            bits: self.to_hex(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = VertexSetRepr::deserialize(deserializer)?;
        VertexSet::from_hex(repr.n, &repr.bits).map_err(serde::de::Error::custom)
    }
}

/// The half plane `H_{n,axis,bit}`.
pub fn half_plane(n: u32, axis: u32, bit: u8) -> Result<VertexSet> {
    check_dim(n)?;
    check_axis(n, axis)?;
    if bit > 1 {
        return Err(Error::Usage(format!(
            "half-plane bit must be 0 or 1, got {bit}"
        )));
    }
    let p = n - axis;
    let vertices = (0..(1u32 << n)).filter(|v| ((v >> p) & 1) as u8 == bit);
    VertexSet::from_vertices(n, vertices)
}

/// Harper's formula for the minimum edge boundary of a `k`-set in `Q_n`,
/// over any integer type. `θ(n, 0) = 0`.
pub fn harper_theta<I>(n: u32, k: &I) -> I
where
    I: Integer + Clone + From<u32>,
{
    let two = I::from(2u32);
    let mut exponents = Vec::new();
    let mut rest = k.clone();
    let mut c = 0u32;
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&two);
        if !r.is_zero() {
            exponents.push(c);
        }
        rest = q;
        c += 1;
    }
    let terms = exponents.len() as u32;
    let mut sum = I::zero();
    let mut pow = I::one();
    let mut last = 0u32;
    for (idx, &c) in exponents.iter().enumerate() {
        for _ in last..c {
            pow = pow * two.clone();
        }
        last = c;
        let rank_term = I::from(terms - 1 - idx as u32) * pow.clone();
        let cube_term = I::from(c) * pow.clone() / two.clone();
        sum = sum + rank_term + cube_term;
    }
    I::from(n) * k.clone() - two * sum
}

/// `θ(n, k)` for `n <= MAX_DIM`.
pub fn theta_opt(n: u32, k: u64) -> Result<u64> {
    check_dim(n)?;
    if k > 1u64 << n {
        return Err(Error::Usage(format!("k={k} outside 0..=2^{n}")));
    }
    Ok(harper_theta(n, &k))
}

/// `θ(n, 2^{n-1}, t)` for small types `t <= 2^{n-3}`: `2θ(n-2, t) + 2^{n-1}`.
pub fn theta_half_type(n: u32, t: u64) -> Result<u64> {
    if !(3..=MAX_DIM).contains(&n) {
        return Err(Error::Usage(format!(
            "theta_half_type needs 3 <= n <= {MAX_DIM}, got {n}"
        )));
    }
    if t > 1u64 << (n - 3) {
        return Err(Error::Domain(format!(
            "type {t} exceeds 2^{} = {}; no closed form for big types",
            n - 3,
            1u64 << (n - 3)
        )));
    }
    let inner = if n == 3 {
        harper_theta(1, &t)
    } else {
        theta_opt(n - 2, t)?
    };
    Ok(2 * inner + (1u64 << (n - 1)))
}

/// A `k`-cubal: the first `k` vertices of the reflected Gray order.
pub fn canonical_cubal(n: u32, k: u64) -> Result<VertexSet> {
    check_dim(n)?;
    if k > 1u64 << n {
        return Err(Error::Usage(format!("k={k} outside 0..=2^{n}")));
    }
    VertexSet::from_vertices(n, (0..k as u32).map(|j| j ^ (j >> 1)))
}

/// `θ(n, k)` for every `k = 0..=2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTable {
    n: u32,
    values: Vec<u64>,
}

impl ThetaTable {
    pub fn new(n: u32) -> Result<Self> {
        check_dim(n)?;
        let values = (0..=(1u64 << n)).map(|k| harper_theta(n, &k)).collect();
        Ok(ThetaTable { n, values })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn get(&self, k: u64) -> u64 {
        self.values[k as usize]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn set(n: u32, words: &[&str]) -> VertexSet {
        VertexSet::from_vertices(n, words.iter().map(|w| u32::from_str_radix(w, 2).unwrap()))
            .unwrap()
    }

    /// Minimum boundary over all k-subsets, by exhaustive enumeration.
    fn brute_min(n: u32, k: u32) -> u64 {
        (0u64..(1u64 << (1u32 << n)))
            .filter(|m| m.count_ones() == k)
            .map(|m| VertexSet::from_mask(n, m).unwrap().boundary_size_direct())
            .min()
            .unwrap()
    }

    #[test]
    fn half_planes_match_definition() {
        assert_eq!(half_plane(2, 1, 0).unwrap(), set(2, &["00", "01"]));
        assert_eq!(
            half_plane(3, 2, 1).unwrap(),
            set(3, &["010", "011", "110", "111"])
        );
        for axis in 1..=5 {
            for bit in 0..=1 {
                assert_eq!(half_plane(5, axis, bit).unwrap().len(), 16);
            }
        }
        assert!(matches!(half_plane(3, 4, 0), Err(Error::Usage(_))));
        assert!(matches!(half_plane(3, 0, 0), Err(Error::Usage(_))));
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(VertexSet::empty(4).unwrap().boundary_size(), 0);
        assert_eq!(VertexSet::full(4).unwrap().boundary_size(), 0);
        let s = set(3, &["000", "001", "010"]);
        assert_eq!(s.boundary_size_direct(), 5);
        assert_eq!(s.boundary_size_multicut(), 5);
        for n in 1..=9 {
            for axis in 1..=n {
                assert_eq!(
                    half_plane(n, axis, 1).unwrap().boundary_size(),
                    1 << (n - 1)
                );
            }
        }
    }

    #[test]
    fn boundary_and_type_on_multiword_sets() {
        let n = 9;
        let s =
            VertexSet::from_vertices(n, (0..512).filter(|v| v % 7 == 0 || v % 11 == 3)).unwrap();
        assert_eq!(s.boundary_size_direct(), s.boundary_size_multicut());
        let t_direct = (1..=n)
            .flat_map(|a| [0u8, 1].map(|b| s.intersection_len(&half_plane(n, a, b).unwrap())))
            .min()
            .unwrap();
        assert_eq!(s.type_of(), t_direct);
    }

    #[test]
    fn type_examples() {
        assert_eq!(half_plane(5, 1, 0).unwrap().type_of(), 0);
        let s = set(3, &["000", "001", "010"]);
        assert_eq!(s.type_of(), 0);
        let s = set(3, &["000", "001", "010", "100"]);
        assert_eq!(s.type_of(), 1);
        assert_eq!(VertexSet::empty(3).unwrap().type_of(), 0);
        assert_eq!(VertexSet::full(3).unwrap().type_of(), 4);
    }

    #[test]
    fn corollary_small_half_plane_intersection_fixes_type() {
        // |S| = 16 in Q_5, |S ∩ H_{5,1,1}| = 3 <= 2^{n-3}.
        let s = VertexSet::from_vertices(5, (0..13).chain(16..19)).unwrap();
        assert_eq!(s.half_plane_count(1, 1).unwrap(), 3);
        assert_eq!(s.type_of(), 3);
        assert_eq!(s.type_witnesses(), vec![(1, 1)]);
    }

    #[test]
    fn theta_examples() {
        for n in 2..=20 {
            assert_eq!(theta_opt(n, 1 << (n - 1)).unwrap(), 1 << (n - 1));
            assert_eq!(theta_opt(n, 0).unwrap(), 0);
        }
        assert_eq!(brute_min(3, 3), 5);
        assert_eq!(theta_opt(3, 3).unwrap(), 5);
        assert_eq!(theta_opt(5, 10).unwrap(), 20);
        assert_eq!(theta_opt(5, 14).unwrap(), 20);
        assert_eq!(theta_opt(6, 3).unwrap(), 14);
        assert!(matches!(theta_opt(3, 9), Err(Error::Usage(_))));
    }

    #[test]
    fn theta_matches_exhaustive_minimum_small_cubes() {
        for n in 1..=4 {
            for k in 0..=(1u32 << n) {
                assert_eq!(
                    theta_opt(n, k as u64).unwrap(),
                    brute_min(n, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn harper_theta_big_integers_agree_with_u64() {
        for n in 1..=12 {
            for k in 0..=(1u64 << n) {
                let big: BigUint = harper_theta(n, &BigUint::from(k));
                assert_eq!(big, BigUint::from(harper_theta(n, &k)));
            }
        }
    }

    #[test]
    fn theta_recurrences_and_sum() {
        for n in 1..=12u32 {
            let table = ThetaTable::new(n).unwrap();
            let full = 1u64 << n;
            assert_eq!(table.get(0), 0);
            assert_eq!(table.get(full), 0);
            for k in 0..=full {
                assert_eq!(table.get(k), table.get(full - k));
                if k <= full / 2 && n >= 2 {
                    assert_eq!(table.get(k), theta_opt(n - 1, k).unwrap() + k);
                }
                if n < 12 {
                    assert_eq!(theta_opt(n + 1, 2 * k).unwrap(), 2 * table.get(k));
                }
            }
            let half_sum: u64 = (0..=full / 2).map(|i| table.get(i)).sum();
            assert_eq!(half_sum, 1u64 << (2 * n - 2));
        }
    }

    #[test]
    fn cubal_realizes_optimum() {
        assert_eq!(canonical_cubal(3, 3).unwrap().boundary_size(), 5);
        assert_eq!(canonical_cubal(5, 10).unwrap().boundary_size(), 20);
        for n in 1..=10 {
            for k in 0..=(1u64 << n) {
                let s = canonical_cubal(n, k).unwrap();
                assert_eq!(s.len(), k);
                assert_eq!(s.boundary_size(), theta_opt(n, k).unwrap(), "n={n} k={k}");
            }
        }
        // 2^j-sets are j-subcubes: boundary j·0 + (n-j)·2^j
        let cube = canonical_cubal(6, 8).unwrap();
        assert_eq!(cube.boundary_size(), 3 * 8);
    }

    #[test]
    fn theta_half_type_values() {
        for n in 3..=12 {
            assert_eq!(theta_half_type(n, 0).unwrap(), 1 << (n - 1));
            assert_eq!(theta_half_type(n, 1 << (n - 3)).unwrap(), 3 << (n - 2));
        }
        assert_eq!(theta_half_type(5, 4).unwrap(), 24);
        assert_eq!(brute_min(3, 2), 4);
        assert_eq!(theta_half_type(5, 2).unwrap(), 2 * 4 + 16);
        assert!(matches!(theta_half_type(5, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn split_examples() {
        let h = half_plane(4, 1, 0).unwrap();
        let (s0, s1) = h.split_by_axis(1).unwrap();
        assert_eq!(s0, VertexSet::full(3).unwrap());
        assert!(s1.is_empty());
        let s = set(3, &["000", "001", "010"]);
        let (s0, s1) = s.split_by_axis(1).unwrap();
        assert_eq!(s0, set(2, &["00", "01", "10"]));
        assert!(s1.is_empty());
        assert!(matches!(s.split_by_axis(4), Err(Error::Usage(_))));
    }

    #[test]
    fn hex_round_trip_and_json() {
        let s = set(3, &["000", "001", "010"]);
        assert_eq!(s.to_hex(), "0x07");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n":3,"bits":"0x07"}"#);
        let back: VertexSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(VertexSet::from_hex(3, "0x107").is_err());
        assert!(VertexSet::from_hex(2, "0x1f").is_err());
        let big = canonical_cubal(8, 77).unwrap();
        assert_eq!(VertexSet::from_hex(8, &big.to_hex()).unwrap(), big);
        assert_eq!(
            VertexSet::from_hex(1, "0x3").unwrap(),
            VertexSet::full(1).unwrap()
        );
    }

    fn arb_set(n: u32) -> impl Strategy<Value = VertexSet> {
        proptest::collection::vec(any::<u64>(), word_count(n)).prop_map(move |mut w| {
            let m = valid_mask(n);
            w.iter_mut().for_each(|x| *x &= m);
            VertexSet { n, words: w }
        })
    }

    proptest! {
        #[test]
        fn onecut_and_multicut_identities(s in (2u32..=8).prop_flat_map(arb_set)) {
            let n = s.dim();
            let theta = s.boundary_size_direct();
            let mut multicut = 0;
            for axis in 1..=n {
                let (s0, s1) = s.split_by_axis(axis).unwrap();
                prop_assert_eq!(s0.len() + s1.len(), s.len());
                let cut = s0.symmetric_difference_len(&s1);
                multicut += cut;
                prop_assert_eq!(theta, s0.boundary_size() + s1.boundary_size() + cut);
            }
            prop_assert_eq!(theta, multicut);
        }

        #[test]
        fn type_bounded_by_half_size(s in (1u32..=8).prop_flat_map(arb_set)) {
            prop_assert!(2 * s.type_of() <= s.len());
        }

        #[test]
        fn complement_type_shift(s in (2u32..=8).prop_flat_map(arb_set)) {
            let half = s.order() / 2;
            let (big, small) = if s.len() >= half { (s.clone(), s.complement()) } else { (s.complement(), s.clone()) };
            prop_assert_eq!(small.type_of() + big.len(), big.type_of() + half);
        }

        #[test]
        fn type_split_inequality(s in (2u32..=8).prop_flat_map(arb_set)) {
            for axis in 1..=s.dim() {
                let (s0, s1) = s.split_by_axis(axis).unwrap();
                prop_assert!(s.type_of() <= 2 * s0.type_of() + s1.difference_len(&s0));
                prop_assert!(s.type_of() <= 2 * s1.type_of() + s0.difference_len(&s1));
            }
        }

        #[test]
        fn unique_half_plane_for_small_type(
            n in 3u32..=7,
            seed in any::<u64>(),
        ) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let order = 1u32 << n;
            // Bias towards small types: start from a half plane and swap a few vertices.
            let mut verts: Vec<u32> = (0..order / 2).collect();
            let mut others: Vec<u32> = (order / 2..order).collect();
            verts.shuffle(&mut rng);
            others.shuffle(&mut rng);
            let swaps = (seed % (order as u64 / 4)) as usize;
            verts[..swaps].copy_from_slice(&others[..swaps]);
            let s = VertexSet::from_vertices(n, verts).unwrap();
            let t = s.type_of();
            if t < 1 << (n - 3) {
                prop_assert_eq!(s.type_witnesses().len(), 1);
                let (wa, wb) = s.type_witnesses()[0];
                for axis in 1..=n {
                    for bit in 0..=1u8 {
                        if (axis, bit) != (wa, wb) {
                            prop_assert!(s.half_plane_count(axis, bit).unwrap() >= (1 << (n - 2)) - t);
                        }
                    }
                }
            }
        }
    }
}
