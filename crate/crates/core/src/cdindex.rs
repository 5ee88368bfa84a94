//! The complete cd-index, its restriction by first reflection, and the
//! decomposition of the restricted sums.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bruhat::{for_each_path_from, letter, BruhatInterval, LabeledGraph};
use crate::coxeter::{CoxeterError, OrderSpec, Permutation, Reflection, ReflectionOrder};
use crate::ncpoly::{
    ad_to_cd, decompose_f_plus_ag, AdLetter, AdMonomial, AdPolynomial, CdMonomial, CdPolynomial,
    Monomial, PolyError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdIndexError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("cd-index of [{u}, {v}] depends on the reflection order: {first} gives {left}, {second} gives {right}")]
    OrderDependent {
        u: Permutation,
        v: Permutation,
        first: String,
        second: String,
        left: String,
        right: String,
    },
}

/// `ψ̃_{u,v}` as a family of homogeneous cd-polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteCdIndex {
    pub u: Permutation,
    pub v: Permutation,
    pub by_degree: BTreeMap<usize, CdPolynomial>,
}

impl CompleteCdIndex {
    pub fn degree(&self, n: usize) -> CdPolynomial {
        self.by_degree.get(&n).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, m: &CdMonomial) -> i64 {
        self.by_degree
            .get(&m.degree())
            .map_or(0, |p| p.coefficient(m))
    }

    /// The sum of all homogeneous parts.
    pub fn total(&self) -> CdPolynomial {
        let mut out = CdPolynomial::zero();
        for p in self.by_degree.values() {
            out = &out + p;
        }
        out
    }

    pub fn to_report(&self, order: &str) -> CdIndexReport {
        CdIndexReport {
            u: self.u.to_string(),
            v: self.v.to_string(),
            cd_index: self
                .by_degree
                .iter()
                .map(|(n, p)| (*n, p.to_string_map()))
                .collect(),
            order: order.to_string(),
        }
    }
}

/// JSON form of a complete cd-index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdIndexReport {
    pub u: String,
    pub v: String,
    pub cd_index: BTreeMap<usize, BTreeMap<String, i64>>,
    pub order: String,
}

/// Degrees that can carry paths: `n ≡ ℓ + 1 (mod 2)` and `n ≤ ℓ - 1`,
/// where `ℓ = l(v) - l(u) ≥ 1`.
pub fn admissible_degrees(iv: &BruhatInterval) -> Vec<usize> {
    let len = iv.length();
    if len == 0 {
        return Vec::new();
    }
    ((len + 1) % 2..len).step_by(2).collect()
}

/// Suffix sums: `words(x, r)` is the sum over paths from `x` to the top of
/// the words they produce when entered by an edge of rank `r`.
struct SuffixWords<'a> {
    iv: &'a BruhatInterval,
    graph: &'a LabeledGraph,
    memo: HashMap<(usize, usize), AdPolynomial>,
}

impl<'a> SuffixWords<'a> {
    fn new(iv: &'a BruhatInterval, graph: &'a LabeledGraph) -> Self {
        Self {
            iv,
            graph,
            memo: HashMap::new(),
        }
    }

    /// Sum of `w(x)` over paths that start at `x` with the given step.
    fn from_step(&mut self, to: usize, rank: usize) -> AdPolynomial {
        if to == self.iv.top() {
            AdPolynomial::constant(1)
        } else {
            self.entered(to, rank)
        }
    }

    fn entered(&mut self, x: usize, rank: usize) -> AdPolynomial {
        if let Some(p) = self.memo.get(&(x, rank)) {
            return p.clone();
        }
        let mut out = AdPolynomial::zero();
        for step in self.graph.steps(x).to_vec() {
            let head = AdMonomial::from_letters(&[letter(rank, step.rank)]);
            let rest = self.from_step(step.to, step.rank);
            out = &out + &rest.left_mul(&head);
        }
        self.memo.insert((x, rank), out.clone());
        out
    }
}

/// `φ̃_{u,v}`: the sum of `w(x)` over all paths from `u` to `v`.
pub fn complete_phi(iv: &BruhatInterval, order: &ReflectionOrder) -> AdPolynomial {
    restricted_phi(iv, order, usize::MAX)
}

fn restricted_phi(iv: &BruhatInterval, order: &ReflectionOrder, bound: usize) -> AdPolynomial {
    let graph = iv.labeled(order);
    let mut words = SuffixWords::new(iv, &graph);
    let mut out = AdPolynomial::zero();
    if iv.len() < 2 {
        return out;
    }
    for step in graph.steps(0) {
        if step.rank <= bound {
            out = &out + &words.from_step(step.to, step.rank);
        }
    }
    out
}

/// Path-by-path version of [`complete_phi`].
pub fn complete_phi_by_enumeration(iv: &BruhatInterval, order: &ReflectionOrder) -> AdPolynomial {
    let graph = iv.labeled(order);
    let mut out = AdPolynomial::zero();
    if iv.len() < 2 {
        return out;
    }
    for n in admissible_degrees(iv) {
        for_each_path_from(iv, &graph, 0, n, |_, steps| {
            let mut w = AdMonomial::empty();
            for pair in steps.windows(2) {
                w.push(letter(pair[0].rank, pair[1].rank));
            }
            out.add_term(w, 1);
        });
    }
    out
}

/// `φ̃^{≤t}_{u,v}` in degree `n`.
pub fn phi_leq_t(
    iv: &BruhatInterval,
    n: usize,
    t: Reflection,
    order: &ReflectionOrder,
) -> AdPolynomial {
    restricted_phi(iv, order, order.rank_of(t)).homogeneous_part(n)
}

/// `ψ̃_{u,v}` under the lex order.
pub fn complete_cd_index(iv: &BruhatInterval) -> Result<CompleteCdIndex, CdIndexError> {
    let order = ReflectionOrder::lex(iv.lower().rank())?;
    complete_cd_index_under(iv, &order)
}

pub fn complete_cd_index_under(
    iv: &BruhatInterval,
    order: &ReflectionOrder,
) -> Result<CompleteCdIndex, CdIndexError> {
    let phi = complete_phi(iv, order);
    let mut by_degree = BTreeMap::new();
    for n in phi.degrees() {
        let part = ad_to_cd(&phi.homogeneous_part(n))?;
        if !part.is_zero() {
            by_degree.insert(n, part);
        }
    }
    Ok(CompleteCdIndex {
        u: iv.lower(),
        v: iv.upper(),
        by_degree,
    })
}

/// Computes `ψ̃` under lex, reversed lex and the default reduced-word order
/// and fails with both values if any two disagree.
pub fn order_independent_cd_index(iv: &BruhatInterval) -> Result<CompleteCdIndex, CdIndexError> {
    let n = iv.lower().rank();
    let specs = [OrderSpec::Lex, OrderSpec::Rev, OrderSpec::default_word(n)];
    let mut first: Option<(String, CompleteCdIndex)> = None;
    for spec in specs {
        let order = spec.build(n)?;
        let psi = complete_cd_index_under(iv, &order)?;
        match &first {
            None => first = Some((spec.to_string(), psi)),
            Some((name, reference)) if *reference != psi => {
                return Err(CdIndexError::OrderDependent {
                    u: iv.lower(),
                    v: iv.upper(),
                    first: name.clone(),
                    second: spec.to_string(),
                    left: reference.total().to_string(),
                    right: psi.total().to_string(),
                });
            }
            Some(_) => {}
        }
    }
    Ok(first.expect("three orders").1)
}

/// `φ̃^{≤t} = f_n + A·g_{n-1}` for every admissible degree `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellingDecomposition {
    pub t: Reflection,
    pub by_degree: BTreeMap<usize, (CdPolynomial, CdPolynomial)>,
}

impl ShellingDecomposition {
    pub fn f(&self, n: usize) -> CdPolynomial {
        self.by_degree.get(&n).map(|(f, _)| f.clone()).unwrap_or_default()
    }

    pub fn g(&self, n: usize) -> CdPolynomial {
        self.by_degree.get(&n).map(|(_, g)| g.clone()).unwrap_or_default()
    }

    /// `f_n + c·g_{n-1}`.
    pub fn f_plus_cg(&self, n: usize) -> CdPolynomial {
        let c = CdMonomial::c_power(1);
        &self.f(n) + &self.g(n).left_mul(&c)
    }

    pub fn g_is_nonnegative(&self) -> bool {
        self.by_degree.values().all(|(_, g)| g.has_nonnegative_coefficients())
    }
}

pub fn shelling_decomposition(
    iv: &BruhatInterval,
    t: Reflection,
    order: &ReflectionOrder,
) -> Result<ShellingDecomposition, CdIndexError> {
    let phi = restricted_phi(iv, order, order.rank_of(t));
    let mut by_degree = BTreeMap::new();
    for n in admissible_degrees(iv) {
        let (f, g) = decompose_f_plus_ag(&phi.homogeneous_part(n), n)?;
        by_degree.insert(n, (f, g));
    }
    Ok(ShellingDecomposition { t, by_degree })
}

/// Number of all-ascending paths of length `n`.
pub fn ascending_path_count(iv: &BruhatInterval, n: usize, order: &ReflectionOrder) -> usize {
    let graph = iv.labeled(order);
    let mut count = 0;
    if iv.len() < 2 {
        return 0;
    }
    for_each_path_from(iv, &graph, 0, n, |_, steps| {
        if steps.windows(2).all(|p| p[0].rank < p[1].rank) {
            count += 1;
        }
    });
    count
}

/// The cd-index of the graded poset `[u, v]` computed from its flag
/// f-vector, using only Bruhat comparisons. Degree `l(v) - l(u) - 1`.
pub fn flag_cd_index_oracle(iv: &BruhatInterval) -> Result<CdPolynomial, CdIndexError> {
    let rank = iv.length();
    if rank == 0 {
        return Err(PolyError::NotHomogeneous { expected: 0 }.into());
    }
    let base = iv.element_length(0);
    let by_rank: Vec<Vec<usize>> = (0..=rank)
        .map(|r| {
            (0..iv.len())
                .filter(|&k| iv.element_length(k) - base == r)
                .collect()
        })
        .collect();
    let inner = rank - 1;
    let subsets = 1usize << inner;
    // Chains through the ranks of S, for each S ⊆ {1, ..., rank - 1}.
    let mut flag_f = vec![0i64; subsets];
    for (s, f) in flag_f.iter_mut().enumerate() {
        let mut levels: Vec<usize> = (1..rank).filter(|r| s & (1 << (r - 1)) != 0).collect();
        levels.push(rank);
        let mut counts: HashMap<usize, i64> = HashMap::from([(0, 1)]);
        for r in levels {
            let mut next = HashMap::new();
            for &y in &by_rank[r] {
                let total: i64 = counts
                    .iter()
                    .filter(|(&x, _)| iv.leq(x, y))
                    .map(|(_, c)| *c)
                    .sum();
                if total != 0 {
                    next.insert(y, total);
                }
            }
            counts = next;
        }
        *f = counts.values().sum();
    }
    let mut ab = AdPolynomial::zero();
    for s in 0..subsets {
        // h_S = Σ_{T ⊆ S} (-1)^{|S - T|} f_T
        let mut h = 0i64;
        let mut t = s;
        loop {
            let sign = if (s & !t).count_ones() % 2 == 0 { 1 } else { -1 };
            h += sign * flag_f[t];
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        let letters: Vec<AdLetter> = (0..inner)
            .map(|k| if s & (1 << k) != 0 { AdLetter::D } else { AdLetter::A })
            .collect();
        ab.add_term(AdMonomial::from_letters(&letters), h);
    }
    Ok(ad_to_cd(&ab)?)
}
