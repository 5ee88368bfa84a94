//! The path sets `T_M(w, v)`, their reverse-order counterparts, the
//! lexicographic flip between them, the signs `s_M(x)` and the flip
//! conditions.
//!
//! A [`TSetTable`] is tied to one interval `[u, v]` and one reflection order.
//! It memoizes `T_γ(w, v)` for every `w` in the interval and every
//! ascent-descent word `γ` that is the image of a cd-monomial, in both
//! orientations. The flip is only ever applied to members of these sets.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bruhat::{enumerate_paths, for_each_path_from, letter, BruhatInterval, BruhatPath, LabeledGraph};
use crate::cdindex::{CdIndexError, CompleteCdIndex, ShellingDecomposition};
use crate::coxeter::{Permutation, Reflection, ReflectionOrder};
use crate::ncpoly::{AdLetter, AdMonomial, CdLetter, CdMonomial, Monomial};

pub type AdWord = AdMonomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlipError {
    #[error("flip undefined on [{w}, {v}] for {word}: {forward} paths against {reverse} under the reverse order")]
    FlipUndefined {
        w: Permutation,
        v: Permutation,
        word: AdWord,
        forward: usize,
        reverse: usize,
    },
    #[error("flip requested for {path}, which is not in the path set of {word}")]
    OutsideTSet { path: String, word: AdWord },
    #[error("{0} is not in the interval")]
    NotInInterval(Permutation),
    #[error("path does not end at the top of the interval")]
    WrongSink,
    #[error("monomial {0} does not start with c")]
    NotStartingWithC(CdMonomial),
    #[error(transparent)]
    CdIndex(#[from] CdIndexError),
}

/// `Forward` builds sets under the table's order, `Reverse` under its
/// reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Forward,
    Reverse,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Self::Forward => Self::Reverse,
            Self::Reverse => Self::Forward,
        }
    }
}

/// A path by vertex indices and forward ranks of its labels.
#[derive(Debug, Clone)]
struct Member {
    vertices: Vec<usize>,
    ranks: Vec<usize>,
}

type MemberSet = Arc<Vec<Member>>;

/// Memoized path sets for a fixed interval `[u, v]` and order.
#[derive(Debug, Clone)]
pub struct TSetTable {
    iv: BruhatInterval,
    order: ReflectionOrder,
    graph: LabeledGraph,
    reflections: usize,
    memo: HashMap<(Orientation, usize, AdWord), Result<MemberSet, FlipError>>,
}

impl TSetTable {
    pub fn new(iv: &BruhatInterval, order: &ReflectionOrder) -> Self {
        Self {
            iv: iv.clone(),
            order: order.clone(),
            graph: iv.labeled(order),
            reflections: order.len(),
            memo: HashMap::new(),
        }
    }

    pub fn interval(&self) -> &BruhatInterval {
        &self.iv
    }

    pub fn order(&self) -> &ReflectionOrder {
        &self.order
    }

    /// Rank under the orientation's order.
    fn key(&self, o: Orientation, rank: usize) -> usize {
        match o {
            Orientation::Forward => rank,
            Orientation::Reverse => self.reflections + 1 - rank,
        }
    }

    fn index(&self, w: Permutation) -> Result<usize, FlipError> {
        self.iv.index_of(&w).ok_or(FlipError::NotInInterval(w))
    }

    fn set(&mut self, o: Orientation, w: usize, word: &AdWord) -> Result<MemberSet, FlipError> {
        if let Some(found) = self.memo.get(&(o, w, *word)) {
            return found.clone();
        }
        let built = self.build(o, w, word);
        self.memo.insert((o, w, *word), built.clone());
        built
    }

    fn build(&mut self, o: Orientation, w: usize, word: &AdWord) -> Result<MemberSet, FlipError> {
        let top = self.iv.top();
        let mut out = Vec::new();
        let Some(head) = word.first() else {
            if let Some(step) = self.graph.step_between(w, top) {
                out.push(Member {
                    vertices: vec![w, top],
                    ranks: vec![step.rank],
                });
            }
            return Ok(Arc::new(out));
        };
        let rest = word.tail();
        for step in self.graph.steps(w).to_vec() {
            if step.to == top {
                continue;
            }
            let tails = self.set(o, step.to, &rest)?;
            let here = self.key(o, step.rank);
            let mut partners: Option<MemberSet> = None;
            for (i, tail) in tails.iter().enumerate() {
                let next = self.key(o, tail.ranks[0]);
                let keep = match head {
                    AdLetter::A => here < next,
                    AdLetter::D if here < next => false,
                    AdLetter::D => {
                        if partners.is_none() {
                            partners = Some(self.partner_set(o, step.to, &rest, tails.len())?);
                        }
                        let flipped = &partners.as_ref().unwrap()[i];
                        here < self.key(o, flipped.ranks[0])
                    }
                };
                if keep {
                    let mut vertices = Vec::with_capacity(tail.vertices.len() + 1);
                    vertices.push(w);
                    vertices.extend_from_slice(&tail.vertices);
                    let mut ranks = Vec::with_capacity(tail.ranks.len() + 1);
                    ranks.push(step.rank);
                    ranks.extend_from_slice(&tail.ranks);
                    out.push(Member { vertices, ranks });
                }
            }
        }
        out.sort_by(|a, b| a.ranks.cmp(&b.ranks));
        Ok(Arc::new(out))
    }

    /// The set the flip maps `T^o_word(x, v)` onto, checked to have
    /// `expected` elements.
    fn partner_set(
        &mut self,
        o: Orientation,
        x: usize,
        word: &AdWord,
        expected: usize,
    ) -> Result<MemberSet, FlipError> {
        let other = self.set(o.flipped(), x, word)?;
        if other.len() != expected {
            let (forward, reverse) = match o {
                Orientation::Forward => (expected, other.len()),
                Orientation::Reverse => (other.len(), expected),
            };
            return Err(FlipError::FlipUndefined {
                w: self.iv.element(x),
                v: self.iv.upper(),
                word: *word,
                forward,
                reverse,
            });
        }
        Ok(other)
    }

    fn to_path(&self, m: &Member) -> BruhatPath {
        BruhatPath::from_parts(
            m.vertices.iter().map(|&k| self.iv.element(k)).collect(),
            m.ranks.iter().map(|&r| self.order.at(r).expect("rank in range")).collect(),
        )
    }

    fn ranks(&self, x: &BruhatPath) -> Vec<usize> {
        x.ranks(&self.order)
    }

    /// `T_γ(w, v)` in the given orientation, sorted lexicographically by
    /// forward label ranks.
    pub fn t_word(
        &mut self,
        o: Orientation,
        w: Permutation,
        word: &AdWord,
    ) -> Result<Vec<BruhatPath>, FlipError> {
        let k = self.index(w)?;
        let set = self.set(o, k, word)?;
        Ok(set.iter().map(|m| self.to_path(m)).collect())
    }

    /// `T_M(w, v)`.
    pub fn compute_t(&mut self, w: Permutation, m: &CdMonomial) -> Result<Vec<BruhatPath>, FlipError> {
        self.t_word(Orientation::Forward, w, &m.to_ad())
    }

    /// `T̄_M(w, v)`: the same construction under the reverse order.
    pub fn compute_t_bar(
        &mut self,
        w: Permutation,
        m: &CdMonomial,
    ) -> Result<Vec<BruhatPath>, FlipError> {
        self.t_word(Orientation::Reverse, w, &m.to_ad())
    }

    /// Pairs the i-th element of `T_γ(w, v)` with the i-th element of
    /// `T̄_γ(w, v)`, both sorted by forward label ranks.
    pub fn flip_pairs(
        &mut self,
        w: Permutation,
        word: &AdWord,
    ) -> Result<Vec<(BruhatPath, BruhatPath)>, FlipError> {
        let k = self.index(w)?;
        let forward = self.set(Orientation::Forward, k, word)?;
        let reverse = self.partner_set(Orientation::Forward, k, word, forward.len())?;
        Ok(forward
            .iter()
            .zip(reverse.iter())
            .map(|(a, b)| (self.to_path(a), self.to_path(b)))
            .collect())
    }

    /// Position of `x` in `T^o_γ(x_0, v)`.
    fn position(&mut self, o: Orientation, x: &BruhatPath, word: &AdWord) -> Result<Option<usize>, FlipError> {
        if x.sink() != self.iv.upper() {
            return Err(FlipError::WrongSink);
        }
        let k = self.index(x.source())?;
        let set = self.set(o, k, word)?;
        let ranks = self.ranks(x);
        Ok(set.binary_search_by(|m| m.ranks.cmp(&ranks)).ok())
    }

    /// Forward rank of the first label of the flip of `x`. Fails unless `x`
    /// lies in the path set of `word` for the orientation.
    fn flipped_first_rank(&mut self, o: Orientation, x: &BruhatPath, word: &AdWord) -> Result<usize, FlipError> {
        let Some(i) = self.position(o, x, word)? else {
            return Err(FlipError::OutsideTSet {
                path: x.rank_string(&self.order),
                word: *word,
            });
        };
        let k = self.index(x.source())?;
        let len = self.set(o, k, word)?.len();
        let partners = self.partner_set(o, k, word, len)?;
        Ok(partners[i].ranks[0])
    }

    /// `F(x)` for `x ∈ T^o_γ(x_0, v)`; with `Reverse` this is the inverse flip.
    pub fn flip(&mut self, o: Orientation, x: &BruhatPath, word: &AdWord) -> Result<BruhatPath, FlipError> {
        let Some(i) = self.position(o, x, word)? else {
            return Err(FlipError::OutsideTSet {
                path: x.rank_string(&self.order),
                word: *word,
            });
        };
        let k = self.index(x.source())?;
        let len = self.set(o, k, word)?.len();
        let partners = self.partner_set(o, k, word, len)?;
        Ok(self.to_path(&partners[i]))
    }

    /// `s_{m,γ_m}(x)` for `1 <= m <= n`. For `γ_m = D` the tail
    /// `x_m ≺ ... ≺ v` must lie in `T_{γ_{m+1}...γ_n}(x_m, v)`.
    pub fn s_factor(&mut self, x: &BruhatPath, word: &AdWord, m: usize) -> Result<i8, FlipError> {
        assert!(m >= 1 && m <= word.len() && x.length() == word.len(), "position out of range");
        let ranks = self.ranks(x);
        let beta = letter(ranks[m - 1], ranks[m]);
        match word.get(m - 1) {
            AdLetter::A => Ok(i8::from(beta == AdLetter::A)),
            AdLetter::D => {
                let suffix = word.slice(m, word.len());
                let first = self.flipped_first_rank(Orientation::Forward, &x.tail(m), &suffix)?;
                let alpha = letter(ranks[m - 1], first);
                Ok(match (beta, alpha) {
                    (AdLetter::D, AdLetter::A) => 1,
                    (AdLetter::A, AdLetter::D) => -1,
                    _ => 0,
                })
            }
        }
    }

    /// `s_M(x)`, evaluated from the right and stopping at the first zero.
    pub fn s_m(&mut self, x: &BruhatPath, mono: &CdMonomial) -> Result<i8, FlipError> {
        let word = mono.to_ad();
        if x.length() != word.len() {
            return Ok(0);
        }
        let mut product = 1;
        for m in (1..=word.len()).rev() {
            let f = self.s_factor(x, &word, m)?;
            if f == 0 {
                return Ok(0);
            }
            product *= f;
        }
        Ok(product)
    }

    /// `Σ s_M(x)` over all paths of the matching length from `u` to `v`.
    pub fn sum_s_m(&mut self, mono: &CdMonomial) -> Result<i64, FlipError> {
        let n = mono.degree();
        let mut total = 0i64;
        for x in enumerate_paths(&self.iv, n, &self.order) {
            total += i64::from(self.s_m(&x, mono)?);
        }
        Ok(total)
    }

    /// Vertices reachable from `u` in exactly `k` steps, for `k <= max`.
    fn layers(&self, max: usize) -> Vec<BTreeSet<usize>> {
        let mut layers = vec![BTreeSet::from([0])];
        for _ in 0..max {
            let next: BTreeSet<usize> = layers
                .last()
                .unwrap()
                .iter()
                .flat_map(|&x| self.graph.steps(x).iter().map(|s| s.to))
                .collect();
            layers.push(next);
        }
        layers
    }

    /// The lexicographically first path of `k` edges from `u` to `w`.
    fn prefix(&self, w: usize, k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        fn go(
            t: &TSetTable,
            w: usize,
            k: usize,
            vertices: &mut Vec<usize>,
            ranks: &mut Vec<usize>,
        ) -> bool {
            let here = *vertices.last().unwrap();
            if k == 0 {
                return here == w;
            }
            let gap = t.iv.element_length(w) as isize - t.iv.element_length(here) as isize;
            if gap < k as isize {
                return false;
            }
            for s in t.graph.steps(here) {
                vertices.push(s.to);
                ranks.push(s.rank);
                if go(t, w, k - 1, vertices, ranks) {
                    return true;
                }
                vertices.pop();
                ranks.pop();
            }
            false
        }
        let mut vertices = vec![0];
        let mut ranks = Vec::new();
        go(self, w, k, &mut vertices, &mut ranks).then_some((vertices, ranks))
    }

    /// Looks for `x ∈ B_n(u, v)` and `m` with `s_{m,γ_m}(x) = -1` and
    /// `s_{l,γ_l}(x) = 1` for all `l > m`. Such an `m` has `γ_m = D`, the
    /// tail from `x_m` is in the suffix set, `t_{m-1} < t_m`, and the first
    /// label of the flipped tail is below `t_{m-1}`. Positions are tried
    /// from the right.
    pub fn check_flip_condition(&mut self, mono: &CdMonomial) -> Result<FlipVerdict, FlipError> {
        let word = mono.to_ad();
        let n = word.len();
        if self.iv.len() < 2 {
            return Ok(FlipVerdict::Holds);
        }
        let top = self.iv.top();
        let layers = self.layers(n);
        for m in (1..=n).rev() {
            if word.get(m - 1) != AdLetter::D {
                continue;
            }
            let suffix = word.slice(m, n);
            for &w in &layers[m - 1] {
                for step in self.graph.steps(w).to_vec() {
                    if step.to == top {
                        continue;
                    }
                    let tails = self.set(Orientation::Forward, step.to, &suffix)?;
                    if tails.iter().all(|tail| step.rank > tail.ranks[0]) {
                        continue;
                    }
                    let partners = self.partner_set(Orientation::Forward, step.to, &suffix, tails.len())?;
                    for (tail, flipped) in tails.iter().zip(partners.iter()) {
                        if step.rank < tail.ranks[0] && step.rank > flipped.ranks[0] {
                            let (mut vertices, mut ranks) =
                                self.prefix(w, m - 1).expect("w is reachable in m - 1 steps");
                            vertices.extend_from_slice(&tail.vertices);
                            ranks.push(step.rank);
                            ranks.extend_from_slice(&tail.ranks);
                            let path = self.to_path(&Member { vertices, ranks });
                            return Ok(FlipVerdict::Violated(FlipWitness {
                                path,
                                position: m,
                                kind: WitnessKind::MinusOneAtM,
                            }));
                        }
                    }
                }
            }
        }
        Ok(FlipVerdict::Holds)
    }

    /// The flip condition checked path by path from the definition.
    pub fn check_flip_condition_by_paths(&mut self, mono: &CdMonomial) -> Result<FlipVerdict, FlipError> {
        let word = mono.to_ad();
        let n = word.len();
        for x in enumerate_paths(&self.iv, n, &self.order) {
            for m in (1..=n).rev() {
                match self.s_factor(&x, &word, m)? {
                    0 => break,
                    -1 => {
                        return Ok(FlipVerdict::Violated(FlipWitness {
                            path: x,
                            position: m,
                            kind: WitnessKind::MinusOneAtM,
                        }))
                    }
                    _ => {}
                }
            }
        }
        Ok(FlipVerdict::Holds)
    }

    /// For `M = cM'`: the first label of `x ∈ T_M(u, v)` never exceeds that
    /// of `F(x)`.
    pub fn check_strong_flip_condition(&mut self, mono: &CdMonomial) -> Result<FlipVerdict, FlipError> {
        if mono.first() != Some(CdLetter::C) {
            return Err(FlipError::NotStartingWithC(*mono));
        }
        let word = mono.to_ad();
        let forward = self.set(Orientation::Forward, 0, &word)?;
        if forward.is_empty() {
            return Ok(FlipVerdict::Holds);
        }
        let reverse = self.partner_set(Orientation::Forward, 0, &word, forward.len())?;
        for (x, y) in forward.iter().zip(reverse.iter()) {
            if x.ranks[0] > y.ranks[0] {
                return Ok(FlipVerdict::Violated(FlipWitness {
                    path: self.to_path(x),
                    position: 0,
                    kind: WitnessKind::StrongFlip,
                }));
            }
        }
        Ok(FlipVerdict::Holds)
    }

    /// Whether some `x ∈ T_{cM'}(u, v)` has `t < t_0(x)` and
    /// `t_0(F(x)) < t`: the path `z ≺ u ≺ x_1 ≺ ...` with `t = z⁻¹u` then
    /// violates the flip condition for `[z, v]` and `dM'`.
    pub fn local_flip_violation(&mut self, t: Reflection, m_prime: &CdMonomial) -> Result<bool, FlipError> {
        let c = CdMonomial::c_power(1);
        let word = c.concat(m_prime).to_ad();
        let bound = self.order.rank_of(t);
        let forward = self.set(Orientation::Forward, 0, &word)?;
        if forward.iter().all(|x| x.ranks[0] < bound) {
            return Ok(false);
        }
        let reverse = self.partner_set(Orientation::Forward, 0, &word, forward.len())?;
        Ok(forward
            .iter()
            .zip(reverse.iter())
            .any(|(x, y)| x.ranks[0] > bound && y.ranks[0] < bound))
    }

    /// Replays a witness against the definitions.
    pub fn verify_witness(&mut self, mono: &CdMonomial, witness: &FlipWitness) -> Result<bool, FlipError> {
        let word = mono.to_ad();
        let x = &witness.path;
        if !x.is_valid()
            || x.source() != self.iv.lower()
            || x.sink() != self.iv.upper()
            || x.length() != word.len()
        {
            return Ok(false);
        }
        match witness.kind {
            WitnessKind::MinusOneAtM => {
                let m = witness.position;
                if m == 0 || m > word.len() {
                    return Ok(false);
                }
                for l in (m + 1..=word.len()).rev() {
                    if self.s_factor(x, &word, l)? != 1 {
                        return Ok(false);
                    }
                }
                Ok(self.s_factor(x, &word, m)? == -1)
            }
            WitnessKind::StrongFlip => {
                if self.position(Orientation::Forward, x, &word)?.is_none() {
                    return Ok(false);
                }
                let y = self.flip(Orientation::Forward, x, &word)?;
                Ok(self.order.rank_of(x.first_reflection()) > self.order.rank_of(y.first_reflection()))
            }
            WitnessKind::SizeMismatch => Ok(false),
        }
    }

    /// `|T_M|`, `|T̄_M|`, the coefficient of `M` in `psi` and `Σ s_M`.
    pub fn verify_coefficient(
        &mut self,
        mono: &CdMonomial,
        psi: &CompleteCdIndex,
    ) -> Result<CoefficientReport, FlipError> {
        let word = mono.to_ad();
        let forward = self.set(Orientation::Forward, 0, &word)?.len();
        let reverse = self.set(Orientation::Reverse, 0, &word)?.len();
        Ok(CoefficientReport {
            monomial: mono.to_string(),
            t_size: forward as i64,
            t_bar_size: reverse as i64,
            coefficient: psi.coefficient(mono),
            sum_s_m: self.sum_s_m(mono)?,
        })
    }

    /// Counts of `T_M` and `T̄_M` with first reflection `<= t`, against the
    /// coefficients of `M` in `f_n` and `f_n + c·g_{n-1}`.
    pub fn check_restricted_counts(
        &mut self,
        mono: &CdMonomial,
        dec: &ShellingDecomposition,
    ) -> Result<RestrictedCountReport, FlipError> {
        let word = mono.to_ad();
        let n = mono.degree();
        let bound = self.order.rank_of(dec.t);
        let count = |set: &MemberSet| set.iter().filter(|x| x.ranks[0] <= bound).count() as i64;
        let forward = self.set(Orientation::Forward, 0, &word)?;
        let reverse = self.set(Orientation::Reverse, 0, &word)?;
        Ok(RestrictedCountReport {
            monomial: mono.to_string(),
            t: dec.t.to_string(),
            t_leq: count(&forward),
            t_bar_leq: count(&reverse),
            f_coefficient: dec.f(n).coefficient(mono),
            f_plus_cg_coefficient: dec.f_plus_cg(n).coefficient(mono),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlipVerdict {
    Holds,
    Violated(FlipWitness),
}

impl FlipVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    MinusOneAtM,
    SizeMismatch,
    StrongFlip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipWitness {
    pub path: BruhatPath,
    pub position: usize,
    pub kind: WitnessKind,
}

impl FlipWitness {
    pub fn to_record(&self, iv: &BruhatInterval, mono: &CdMonomial, order: &ReflectionOrder) -> WitnessRecord {
        WitnessRecord {
            interval: [iv.lower().to_string(), iv.upper().to_string()],
            monomial: mono.to_string(),
            path: self.path.rank_string(order),
            position: self.position,
            kind: self.kind,
        }
    }
}

/// JSON form of a witness. A size mismatch carries the sub-interval whose
/// sets differ in size and an empty path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub interval: [String; 2],
    pub monomial: String,
    pub path: String,
    pub position: usize,
    pub kind: WitnessKind,
}

impl WitnessRecord {
    pub fn size_mismatch(error: &FlipError) -> Option<Self> {
        match error {
            FlipError::FlipUndefined { w, v, word, .. } => Some(Self {
                interval: [w.to_string(), v.to_string()],
                monomial: word.to_string(),
                path: String::new(),
                position: 0,
                kind: WitnessKind::SizeMismatch,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub monomial: String,
    pub t_size: i64,
    pub t_bar_size: i64,
    pub coefficient: i64,
    pub sum_s_m: i64,
}

impl CoefficientReport {
    pub fn is_consistent(&self) -> bool {
        self.t_size == self.t_bar_size && self.t_size == self.coefficient && self.coefficient == self.sum_s_m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedCountReport {
    pub monomial: String,
    pub t: String,
    pub t_leq: i64,
    pub t_bar_leq: i64,
    pub f_coefficient: i64,
    pub f_plus_cg_coefficient: i64,
}

impl RestrictedCountReport {
    pub fn is_consistent(&self) -> bool {
        self.t_bar_leq == self.f_coefficient && self.t_leq == self.f_plus_cg_coefficient
    }
}

/// Failure of the first-reflection property of ascending and descending
/// paths of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyerViolation {
    pub n: usize,
    pub ascending: BruhatPath,
    pub descending: BruhatPath,
}

/// Checks that for every length `n`, each all-ascending path from `u` to
/// `v` has a first label no later than that of each all-descending path.
pub fn check_dyer_property(iv: &BruhatInterval, order: &ReflectionOrder) -> Result<(), DyerViolation> {
    if iv.len() < 2 {
        return Ok(());
    }
    let graph = iv.labeled(order);
    let mut ascending: HashMap<usize, (usize, Vec<usize>, Vec<usize>)> = HashMap::new();
    let mut descending: HashMap<usize, (usize, Vec<usize>, Vec<usize>)> = HashMap::new();
    monotone_paths(iv, &graph, true, &mut |vs, rs| {
        let n = rs.len() - 1;
        let e = ascending.entry(n).or_insert((0, Vec::new(), Vec::new()));
        if rs[0] > e.0 {
            *e = (rs[0], vs.to_vec(), rs.to_vec());
        }
    });
    monotone_paths(iv, &graph, false, &mut |vs, rs| {
        let n = rs.len() - 1;
        let e = descending.entry(n).or_insert((usize::MAX, Vec::new(), Vec::new()));
        if rs[0] < e.0 {
            *e = (rs[0], vs.to_vec(), rs.to_vec());
        }
    });
    let mut lengths: Vec<usize> = ascending.keys().copied().collect();
    lengths.sort_unstable();
    for n in lengths {
        let (a, av, ar) = &ascending[&n];
        if let Some((d, dv, dr)) = descending.get(&n) {
            if a > d {
                let path = |vs: &[usize], rs: &[usize]| {
                    BruhatPath::from_parts(
                        vs.iter().map(|&k| iv.element(k)).collect(),
                        rs.iter().map(|&r| order.at(r).unwrap()).collect(),
                    )
                };
                return Err(DyerViolation {
                    n,
                    ascending: path(av, ar),
                    descending: path(dv, dr),
                });
            }
        }
    }
    Ok(())
}

/// All paths from `u` to `v` whose labels strictly increase (or decrease).
fn monotone_paths<F>(iv: &BruhatInterval, graph: &LabeledGraph, up: bool, visit: &mut F)
where
    F: FnMut(&[usize], &[usize]),
{
    fn go<F: FnMut(&[usize], &[usize])>(
        iv: &BruhatInterval,
        graph: &LabeledGraph,
        up: bool,
        vs: &mut Vec<usize>,
        rs: &mut Vec<usize>,
        visit: &mut F,
    ) {
        let here = *vs.last().unwrap();
        if here == iv.top() {
            visit(vs, rs);
            return;
        }
        for s in graph.steps(here) {
            let fits = match rs.last() {
                None => true,
                Some(&r) => (up && s.rank > r) || (!up && s.rank < r),
            };
            if fits {
                vs.push(s.to);
                rs.push(s.rank);
                go(iv, graph, up, vs, rs, visit);
                vs.pop();
                rs.pop();
            }
        }
    }
    go(iv, graph, up, &mut vec![0], &mut Vec::new(), visit);
}

/// `|B_n(u, v)|`.
pub fn count_paths(iv: &BruhatInterval, n: usize, order: &ReflectionOrder) -> usize {
    if iv.len() < 2 {
        return 0;
    }
    let graph = iv.labeled(order);
    let mut count = 0;
    for_each_path_from(iv, &graph, 0, n, |_, _| count += 1);
    count
}
