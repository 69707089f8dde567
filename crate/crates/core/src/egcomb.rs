//! Staircase standard Young tableaux, sorting networks and the rational
//! functions `F_σ`, `G_σ` built from them.
//!
//! Both families have `M = N(N-1)/2` steps: a tableau of shape
//! `(N-1, N-2, ..., 1)` grows one box at a time, a sorting network applies one
//! adjacent ascent swap at a time. Each object carries
//!
//! * `corners`: the entries at the row ends (tableau, read from the bottom row
//!   up) or the last use of each swap position (network),
//! * `sigma`: the ranking permutation of `corners`,
//! * `de`: before step `k+1`, the number of addable boxes (tableau) or of
//!   ascents (network), for `k = 0..M-1`.
//!
//! With `c̄` the increasing rearrangement of `corners` and `c̄(0) = 0`, an
//! object contributes `prod_k prod_{c̄(k-1) < i <= c̄(k)} 1 / (x_k + de(i-1))`.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clockfield::{derive_seed, seeded_rng};
use crate::error::{Error, Result};

/// Largest `N` whose objects are materialized in memory.
pub const MAX_MATERIALIZED_N: usize = 6;
/// Largest `N` accepted by the streaming visitors.
pub const MAX_VISIT_N: usize = 7;

fn steps(n: usize) -> usize {
    n * (n - 1) / 2
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Config(format!("N must be >= 2, got {n}")));
    }
    if n > max {
        return Err(Error::Resource(format!("N = {n} exceeds the bound {max}")));
    }
    Ok(())
}

/// Row-major offset of cell `(i, j)` (1-based) of the staircase `δ_N`.
fn cell_offset(n: usize, i: usize, j: usize) -> usize {
    // Rows 1..i-1 have lengths N-1, N-2, ..., N-i+1.
    (i - 1) * n - i * (i - 1) / 2 + (j - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StaircaseTableau {
    pub n: usize,
    /// Entries of rows `1..N-1` concatenated; row `i` has `N-i` entries.
    pub entries: Vec<u8>,
}

impl StaircaseTableau {
    pub fn from_rows(n: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let t = Self {
            n,
            entries: rows.concat(),
        };
        let ok_shape = rows.len() == n.saturating_sub(1)
            && rows.iter().enumerate().all(|(i, r)| r.len() == n - 1 - i);
        if !ok_shape {
            return Err(Error::Invariant("rows do not form a staircase".into()));
        }
        t.validate()?;
        Ok(t)
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.entries[cell_offset(self.n, i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (1..self.n)
            .map(|i| (1..=self.n - i).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let m = steps(self.n);
        let mut seen = vec![false; m + 1];
        for &e in &self.entries {
            let e = e as usize;
            if e == 0 || e > m || seen[e] {
                return Err(Error::Invariant(format!("entries are not 1..={m}")));
            }
            seen[e] = true;
        }
        for i in 1..self.n {
            for j in 1..=self.n - i {
                let v = self.entry(i, j);
                if (j > 1 && self.entry(i, j - 1) >= v) || (i > 1 && self.entry(i - 1, j) >= v) {
                    return Err(Error::Invariant(format!("not increasing at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// Row-major entries, comma separated.
    pub fn serialize_entries(&self) -> String {
        join(&self.entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SortingNetworkWord {
    pub n: usize,
    pub s: Vec<u8>,
}

impl SortingNetworkWord {
    pub fn new(n: usize, s: Vec<u8>) -> Result<Self> {
        let w = Self { n, s };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s.len() != steps(self.n) {
            return Err(Error::Invariant(format!(
                "word length {} != {}",
                self.s.len(),
                steps(self.n)
            )));
        }
        let mut v: Vec<usize> = (1..=self.n).collect();
        for &k in &self.s {
            let k = k as usize;
            if k == 0 || k >= self.n || v[k - 1] > v[k] {
                return Err(Error::Invariant(format!("swap {k} is not an ascent")));
            }
            v.swap(k - 1, k);
        }
        Ok(())
    }

    pub fn serialize_word(&self) -> String {
        join(&self.s)
    }
}

fn join(v: &[u8]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberSource {
    Tableau,
    Network,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberVectors {
    pub source: FiberSource,
    /// `co` for tableaux, `la` for networks.
    pub corners: Vec<u32>,
    pub sigma: Vec<u8>,
    pub de: Vec<u8>,
}

/// 1-based ranks of distinct values.
pub fn ranking(values: &[u32]) -> Vec<u8> {
    values
        .iter()
        .map(|v| 1 + values.iter().filter(|w| *w < v).count() as u8)
        .collect()
}

impl FiberVectors {
    fn new(source: FiberSource, corners: Vec<u32>, de: Vec<u8>) -> Self {
        Self {
            source,
            sigma: ranking(&corners),
            corners,
            de,
        }
    }

    /// Exponents `e[(k-1)(N-1) + (d-1)]` of `1/(x_k + d)` in the object's product.
    pub fn signature(&self) -> Result<Vec<u8>> {
        let dim = self.corners.len();
        let mut bar = self.corners.clone();
        bar.sort_unstable();
        if bar.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invariant("corner entries are not distinct".into()));
        }
        let mut sig = vec![0u8; dim * dim];
        let mut prev = 0usize;
        for (k, &b) in bar.iter().enumerate() {
            for i in prev + 1..=b as usize {
                let d = self.de[i - 1] as usize;
                if d == 0 || d > dim {
                    return Err(Error::Invariant(format!("de = {d} out of range")));
                }
                sig[k * dim + d - 1] += 1;
            }
            prev = b as usize;
        }
        Ok(sig)
    }

    /// The object's own product at `x`.
    pub fn product(&self, x: &[BigRational]) -> Result<BigRational> {
        let sig = self.signature()?;
        let mut acc = SignatureSum::new(self.corners.len(), x)?;
        acc.add(&sig, 1);
        acc.value()
    }
}

pub fn tableau_vectors(t: &StaircaseTableau) -> FiberVectors {
    let n = t.n;
    let corners = (1..n).map(|k| t.entry(n - k, k) as u32).collect();
    // Replay the growth: row r gains the box holding entry k.
    let mut row_of = vec![0usize; steps(n) + 1];
    for i in 1..n {
        for j in 1..=n - i {
            row_of[t.entry(i, j) as usize] = i;
        }
    }
    let mut len = vec![0usize; n];
    let mut de = Vec::with_capacity(steps(n));
    for k in 1..=steps(n) {
        de.push(addable_rows(n, &len).count() as u8);
        len[row_of[k] - 1] += 1;
    }
    FiberVectors::new(FiberSource::Tableau, corners, de)
}

/// Rows (0-based) where a box can be added to the partition `len` inside `δ_N`.
fn addable_rows(n: usize, len: &[usize]) -> impl Iterator<Item = usize> + '_ {
    (0..n - 1).filter(move |&r| len[r] < n - 1 - r && (r == 0 || len[r - 1] > len[r]))
}

pub fn network_vectors(w: &SortingNetworkWord) -> FiberVectors {
    let n = w.n;
    let mut la = vec![0u32; n - 1];
    for (i, &k) in w.s.iter().enumerate() {
        la[k as usize - 1] = i as u32 + 1;
    }
    let mut v: Vec<usize> = (1..=n).collect();
    let mut de = Vec::with_capacity(w.s.len());
    for &k in &w.s {
        de.push(v.windows(2).filter(|p| p[0] < p[1]).count() as u8);
        v.swap(k as usize - 1, k as usize);
    }
    FiberVectors::new(FiberSource::Network, la, de)
}

/// Calls `f` on every tableau of `SYT(δ_N)`.
pub fn visit_syt<F: FnMut(&StaircaseTableau)>(n: usize, mut f: F) -> Result<()> {
    check_n(n, MAX_VISIT_N)?;
    let mut t = StaircaseTableau {
        n,
        entries: vec![0; steps(n)],
    };
    let mut len = vec![0usize; n];
    fn rec<F: FnMut(&StaircaseTableau)>(
        k: usize,
        t: &mut StaircaseTableau,
        len: &mut Vec<usize>,
        f: &mut F,
    ) {
        let n = t.n;
        if k > steps(n) {
            f(t);
            return;
        }
        let rows: Vec<usize> = addable_rows(n, len).collect();
        for r in rows {
            len[r] += 1;
            t.entries[cell_offset(n, r + 1, len[r])] = k as u8;
            rec(k + 1, t, len, f);
            len[r] -= 1;
        }
    }
    rec(1, &mut t, &mut len, &mut f);
    Ok(())
}

/// Calls `f` on every sorting network of `S_N`.
pub fn visit_networks<F: FnMut(&SortingNetworkWord)>(n: usize, mut f: F) -> Result<()> {
    check_n(n, MAX_VISIT_N)?;
    let mut w = SortingNetworkWord { n, s: Vec::new() };
    let mut v: Vec<usize> = (1..=n).collect();
    fn rec<F: FnMut(&SortingNetworkWord)>(
        w: &mut SortingNetworkWord,
        v: &mut Vec<usize>,
        f: &mut F,
    ) {
        if w.s.len() == steps(w.n) {
            f(w);
            return;
        }
        for k in 1..w.n {
            if v[k - 1] < v[k] {
                v.swap(k - 1, k);
                w.s.push(k as u8);
                rec(w, v, f);
                w.s.pop();
                v.swap(k - 1, k);
            }
        }
    }
    rec(&mut w, &mut v, &mut f);
    Ok(())
}

pub fn enumerate_syt(n: usize) -> Result<Vec<StaircaseTableau>> {
    check_n(n, MAX_MATERIALIZED_N)?;
    let mut out = Vec::new();
    visit_syt(n, |t| out.push(t.clone()))?;
    Ok(out)
}

pub fn enumerate_networks(n: usize) -> Result<Vec<SortingNetworkWord>> {
    check_n(n, MAX_MATERIALIZED_N)?;
    let mut out = Vec::new();
    visit_networks(n, |w| out.push(w.clone()))?;
    Ok(out)
}

/// `|SYT(δ_N)|` by the hook-length formula; hooks in `δ_N` are `2(N-i-j)+1`.
pub fn hook_length_count(n: usize) -> u128 {
    let m = steps(n) as u128;
    let mut num: u128 = (1..=m).product();
    for i in 1..n {
        for j in 1..=n - i {
            num /= (2 * (n - i - j) + 1) as u128;
        }
    }
    num
}

/// Accumulates `sum count * prod 1/(x_k+d)^e` over signatures, over one
/// common denominator.
struct SignatureSum {
    dim: usize,
    /// Numerator and denominator of `x_k + d`, at `(k-1) * dim + (d-1)`.
    shifted: Vec<BigInt>,
    denoms: Vec<BigInt>,
    terms: Vec<(Vec<u8>, u64)>,
}

impl SignatureSum {
    fn new(dim: usize, x: &[BigRational]) -> Result<Self> {
        if x.len() != dim {
            return Err(Error::Domain(format!("need {dim} coordinates, got {}", x.len())));
        }
        let mut shifted = Vec::with_capacity(dim * dim);
        let mut denoms = Vec::with_capacity(dim);
        for xk in x {
            denoms.push(xk.denom().clone());
            for d in 1..=dim {
                let v = xk.numer() + xk.denom() * BigInt::from(d);
                if v.is_zero() {
                    return Err(Error::Evaluation(format!("x = {xk} makes x + {d} vanish")));
                }
                shifted.push(v);
            }
        }
        Ok(Self {
            dim,
            shifted,
            denoms,
            terms: Vec::new(),
        })
    }

    fn add(&mut self, sig: &[u8], count: u64) {
        self.terms.push((sig.to_vec(), count));
    }

    fn value(&self) -> Result<BigRational> {
        if self.terms.is_empty() {
            return Ok(BigRational::zero());
        }
        let mut max_e = vec![0u8; self.dim * self.dim];
        for (sig, _) in &self.terms {
            for (m, &e) in max_e.iter_mut().zip(sig) {
                *m = (*m).max(e);
            }
        }
        let mut denom = BigInt::one();
        for (v, &e) in self.shifted.iter().zip(&max_e) {
            denom *= v.pow(e as u32);
        }
        let mut numer = BigInt::zero();
        for (sig, count) in &self.terms {
            // 1/(x_k + d) = q_k / (p_k + d q_k); q_k appears once per factor.
            let mut term = BigInt::from(*count);
            for k in 0..self.dim {
                let factors: u32 = sig[k * self.dim..(k + 1) * self.dim]
                    .iter()
                    .map(|&e| e as u32)
                    .sum();
                if factors > 0 && !self.denoms[k].is_one() {
                    term *= self.denoms[k].pow(factors);
                }
            }
            for (i, (&e, &m)) in sig.iter().zip(&max_e).enumerate() {
                if m > e {
                    term *= self.shifted[i].pow((m - e) as u32);
                }
            }
            numer += term;
        }
        Ok(BigRational::new(numer, denom))
    }
}

/// Objects of one family grouped by `σ`, each fiber as signature counts.
#[derive(Debug, Clone)]
pub struct FiberIndex {
    pub n: usize,
    pub source: FiberSource,
    pub fibers: BTreeMap<Vec<u8>, HashMap<Vec<u8>, u64>>,
    pub total: u64,
}

impl FiberIndex {
    fn build<V>(n: usize, source: FiberSource, visit: V) -> Result<Self>
    where
        V: FnOnce(&mut dyn FnMut(FiberVectors)) -> Result<()>,
    {
        let mut fibers: BTreeMap<Vec<u8>, HashMap<Vec<u8>, u64>> = BTreeMap::new();
        let mut total = 0;
        let mut err = None;
        visit(&mut |fv: FiberVectors| match fv.signature() {
            Ok(sig) => {
                *fibers.entry(fv.sigma).or_default().entry(sig).or_default() += 1;
                total += 1;
            }
            Err(e) => {
                err.get_or_insert(e);
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(Self {
            n,
            source,
            fibers,
            total,
        })
    }

    pub fn tableaux(n: usize) -> Result<Self> {
        Self::build(n, FiberSource::Tableau, |f| {
            visit_syt(n, |t| f(tableau_vectors(t)))
        })
    }

    pub fn networks(n: usize) -> Result<Self> {
        Self::build(n, FiberSource::Network, |f| {
            visit_networks(n, |w| f(network_vectors(w)))
        })
    }

    pub fn fiber_size(&self, sigma: &[u8]) -> u64 {
        self.fibers
            .get(sigma)
            .map_or(0, |f| f.values().sum())
    }

    pub fn distinct_signatures(&self, sigma: &[u8]) -> usize {
        self.fibers.get(sigma).map_or(0, |f| f.len())
    }

    /// The fiber sum at `x`; `F_σ` for tableaux, `G_σ` for networks.
    pub fn eval(&self, sigma: &[u8], x: &[BigRational]) -> Result<BigRational> {
        let mut acc = SignatureSum::new(self.n - 1, x)?;
        if let Some(fiber) = self.fibers.get(sigma) {
            for (sig, &count) in fiber {
                acc.add(sig, count);
            }
        }
        acc.value()
    }

    /// Sum over all fibers at `x`.
    pub fn eval_total(&self, x: &[BigRational]) -> Result<BigRational> {
        let mut acc = SignatureSum::new(self.n - 1, x)?;
        for fiber in self.fibers.values() {
            for (sig, &count) in fiber {
                acc.add(sig, count);
            }
        }
        acc.value()
    }
}

fn check_sigma(n: usize, sigma: &[u8]) -> Result<()> {
    let mut sorted = sigma.to_vec();
    sorted.sort_unstable();
    if !sorted.iter().copied().eq(1..=(n as u8 - 1)) {
        return Err(Error::Domain(format!("{sigma:?} is not a permutation of 1..{}", n - 1)));
    }
    Ok(())
}

/// `F_σ(x)`, enumerating `SYT(δ_N)`.
pub fn eval_f(n: usize, sigma: &[u8], x: &[BigRational]) -> Result<BigRational> {
    check_sigma(n, sigma)?;
    FiberIndex::tableaux(n)?.eval(sigma, x)
}

/// `G_σ(x)`, enumerating the sorting networks of `S_N`.
pub fn eval_g(n: usize, sigma: &[u8], x: &[BigRational]) -> Result<BigRational> {
    check_sigma(n, sigma)?;
    FiberIndex::networks(n)?.eval(sigma, x)
}

/// All permutations of `1..=m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<u8>> {
    let mut p: Vec<u8> = (1..=m as u8).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaResult {
    pub sigma: Vec<u8>,
    pub tableaux: u64,
    pub networks: u64,
    pub tableau_signatures: usize,
    pub network_signatures: usize,
    pub points_checked: usize,
    pub equal: bool,
    /// First point where the two sides differ.
    pub failure: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FgReport {
    pub n: usize,
    pub tableaux: u64,
    pub networks: u64,
    pub hook_length: u128,
    pub totals_equal: bool,
    pub per_sigma: Vec<SigmaResult>,
    pub pass: bool,
}

/// Checks `F_σ = G_σ` for every `σ` at random integer points in `[1e4, 1e9]`.
pub fn verify_fg_identity(n: usize, num_points: usize, seed: u64) -> Result<FgReport> {
    check_n(n, MAX_MATERIALIZED_N)?;
    let tab = FiberIndex::tableaux(n)?;
    let net = FiberIndex::networks(n)?;
    let point = |s: u64| -> Vec<BigRational> {
        let mut rng = seeded_rng(s);
        (1..n)
            .map(|_| BigRational::from_integer(rng.random_range(10_000i64..=1_000_000_000).into()))
            .collect()
    };
    let sigmas = permutations(n - 1);
    let per_sigma = crate::par::try_map_trials(sigmas.len(), |si| -> Result<SigmaResult> {
        let sigma = &sigmas[si];
        let mut failure = None;
        let mut checked = 0;
        for p in 0..num_points {
            let x = point(derive_seed(seed, (si * num_points + p) as u64));
            checked += 1;
            if tab.eval(sigma, &x)? != net.eval(sigma, &x)? {
                failure = Some(x.iter().map(|v| v.to_string()).collect());
                break;
            }
        }
        Ok(SigmaResult {
            sigma: sigma.clone(),
            tableaux: tab.fiber_size(sigma),
            networks: net.fiber_size(sigma),
            tableau_signatures: tab.distinct_signatures(sigma),
            network_signatures: net.distinct_signatures(sigma),
            points_checked: checked,
            equal: failure.is_none(),
            failure,
        })
    })?;
    let x = point(derive_seed(seed, u64::MAX));
    let totals_equal = tab.eval_total(&x)? == net.eval_total(&x)?;
    let hook_length = hook_length_count(n);
    let pass = totals_equal
        && tab.total as u128 == hook_length
        && net.total == tab.total
        && per_sigma.iter().all(|r| r.equal && r.tableaux == r.networks);
    Ok(FgReport {
        n,
        tableaux: tab.total,
        networks: net.total,
        hook_length,
        totals_equal,
        per_sigma,
        pass,
    })
}

/// Edelman–Greene insertion of a word; returns the insertion and recording
/// tableaux as rows.
pub fn eg_insert(word: &[u8]) -> (Vec<Vec<u8>>, Vec<Vec<u8>>) {
    let mut p: Vec<Vec<u8>> = Vec::new();
    let mut q: Vec<Vec<u8>> = Vec::new();
    for (t, &letter) in word.iter().enumerate() {
        let mut x = letter;
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![x]);
                q.push(vec![t as u8 + 1]);
                break;
            }
            let row = &mut p[r];
            match row.iter().position(|&y| y > x) {
                None => {
                    row.push(x);
                    q[r].push(t as u8 + 1);
                    break;
                }
                Some(pos) => {
                    let y = row[pos];
                    if y == x + 1 && row.contains(&x) {
                        x += 1;
                    } else {
                        row[pos] = x;
                        x = y;
                    }
                }
            }
            r += 1;
        }
    }
    (p, q)
}

/// The map `EG_N` from tableaux to sorting networks, as a table sorted by tableau.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgCorrespondence {
    pub n: usize,
    pub pairs: Vec<(StaircaseTableau, SortingNetworkWord)>,
}

impl EgCorrespondence {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["tableau", "word"])?;
        for (t, s) in &self.pairs {
            wr.write_record([t.serialize_entries(), s.serialize_word()])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Inserts every sorting network and inverts the word-to-recording-tableau map.
pub fn eg_correspondence(n: usize) -> Result<EgCorrespondence> {
    check_n(n, MAX_MATERIALIZED_N)?;
    let mut pairs = Vec::new();
    let mut err = None;
    visit_networks(n, |w| {
        let (_, q) = eg_insert(&w.s);
        match StaircaseTableau::from_rows(n, &q) {
            Ok(t) => pairs.push((t, w.clone())),
            Err(e) => {
                err.get_or_insert(Error::Construction(format!(
                    "recording tableau of {:?} is not a staircase SYT: {e}",
                    w.s
                )));
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    pairs.sort();
    if pairs.windows(2).any(|p| p[0].0 == p[1].0) {
        return Err(Error::Construction("two words share a recording tableau".into()));
    }
    if pairs.len() as u128 != hook_length_count(n) {
        return Err(Error::Construction(format!(
            "{} tableaux reached, expected {}",
            pairs.len(),
            hook_length_count(n)
        )));
    }
    Ok(EgCorrespondence { n, pairs })
}

/// A pair `(λ, EG(λ))` whose individual products differ at `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorWitness {
    pub tableau: StaircaseTableau,
    pub word: SortingNetworkWord,
    pub tableau_product: String,
    pub word_product: String,
    pub mismatches: usize,
}

/// First pair of the correspondence whose products differ at `x`, with the
/// total number of such pairs.
pub fn find_factor_witness(eg: &EgCorrespondence, x: &[BigRational]) -> Result<Option<FactorWitness>> {
    let mut first = None;
    let mut mismatches = 0;
    for (t, w) in &eg.pairs {
        let a = tableau_vectors(t).product(x)?;
        let b = network_vectors(w).product(x)?;
        if a != b {
            mismatches += 1;
            first.get_or_insert((t, w, a, b));
        }
    }
    Ok(first.map(|(t, w, a, b)| FactorWitness {
        tableau: t.clone(),
        word: w.clone(),
        tableau_product: a.to_string(),
        word_product: b.to_string(),
        mismatches,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_tableau_vectors() {
        let a = StaircaseTableau::from_rows(3, &[vec![1, 2], vec![3]]).unwrap();
        let v = tableau_vectors(&a);
        assert_eq!((v.corners, v.sigma, v.de), (vec![3, 2], vec![2, 1], vec![1, 2, 1]));
        let b = StaircaseTableau::from_rows(3, &[vec![1, 3], vec![2]]).unwrap();
        let v = tableau_vectors(&b);
        assert_eq!((v.corners, v.sigma, v.de), (vec![2, 3], vec![1, 2], vec![1, 2, 1]));
        let c = StaircaseTableau::from_rows(2, &[vec![1]]).unwrap();
        let v = tableau_vectors(&c);
        assert_eq!((v.corners, v.sigma, v.de), (vec![1], vec![1], vec![1]));
        assert!(StaircaseTableau::from_rows(3, &[vec![2, 1], vec![3]]).is_err());
    }

    #[test]
    fn small_network_vectors() {
        let v = network_vectors(&SortingNetworkWord::new(3, vec![1, 2, 1]).unwrap());
        assert_eq!((v.corners, v.sigma, v.de), (vec![3, 2], vec![2, 1], vec![2, 1, 1]));
        let v = network_vectors(&SortingNetworkWord::new(3, vec![2, 1, 2]).unwrap());
        assert_eq!((v.corners, v.sigma, v.de), (vec![2, 3], vec![1, 2], vec![2, 1, 1]));
        let v = network_vectors(&SortingNetworkWord::new(2, vec![1]).unwrap());
        assert_eq!((v.corners, v.sigma, v.de), (vec![1], vec![1], vec![1]));
        assert!(SortingNetworkWord::new(3, vec![1, 1, 2]).is_err());
    }

    #[test]
    fn enumeration_bounds() {
        assert!(matches!(enumerate_syt(7), Err(Error::Resource(_))));
        assert!(matches!(enumerate_networks(1), Err(Error::Config(_))));
        let nets = enumerate_networks(3).unwrap();
        let words: Vec<Vec<u8>> = nets.into_iter().map(|w| w.s).collect();
        assert_eq!(words, vec![vec![1, 2, 1], vec![2, 1, 2]]);
    }

    #[test]
    fn small_evaluations() {
        assert_eq!(eval_f(2, &[1], &[q(1)]).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(eval_g(2, &[1], &[q(1)]).unwrap(), BigRational::new(1.into(), 2.into()));
        let twelfth = BigRational::new(1.into(), 12.into());
        for sigma in [[2u8, 1], [1, 2]] {
            assert_eq!(eval_f(3, &sigma, &[q(1), q(1)]).unwrap(), twelfth);
            assert_eq!(eval_g(3, &sigma, &[q(1), q(1)]).unwrap(), twelfth);
        }
        assert!(matches!(eval_f(3, &[1, 2], &[q(-1), q(1)]), Err(Error::Evaluation(_))));
        assert!(eval_f(3, &[1, 1], &[q(1), q(1)]).is_err());
    }

    #[test]
    fn rational_points() {
        let half = BigRational::new(1.into(), 2.into());
        // 1/(1/2 + 1) = 2/3
        assert_eq!(
            eval_f(2, &[1], &[half]).unwrap(),
            BigRational::new(2.into(), 3.into())
        );
    }

    #[test]
    fn hook_lengths() {
        let counts: Vec<u128> = (2..=7).map(hook_length_count).collect();
        assert_eq!(counts, vec![1, 2, 16, 768, 292864, 1100742656]);
    }

    #[test]
    fn permutations_are_lexicographic() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![1, 3, 2]);
    }

    #[test]
    fn eg_small() {
        let (p, q) = eg_insert(&[1, 2, 1]);
        assert_eq!(p, vec![vec![1, 2], vec![2]]);
        assert_eq!(q, vec![vec![1, 2], vec![3]]);
        let eg = eg_correspondence(3).unwrap();
        assert_eq!(eg.pairs.len(), 2);
    }
}
