//! Exhaustive and sampled sweeps over intervals of `S_n`.
//!
//! Every interval is evaluated independently. With the `parallel` feature
//! the work is spread over a rayon pool; results always come back in input
//! order, so output is identical either way.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bruhat::BruhatInterval;
use crate::cdindex::{admissible_degrees, complete_cd_index_under, shelling_decomposition, ShellingDecomposition};
use crate::coxeter::{CoxeterError, Permutation, ReflectionOrder};
use crate::flips::{FlipError, FlipVerdict, TSetTable, WitnessRecord};
use crate::ncpoly::{cd_monomials, CdLetter, CdMonomial, Monomial};

/// All `(u, v)` with `u <= v` and `l(v) - l(u) <= max_length`, sorted by
/// length difference, then `u`, then `v`.
pub fn all_intervals(n: usize, max_length: usize) -> Result<Vec<(Permutation, Permutation)>, CoxeterError> {
    let perms = Permutation::all(n)?;
    let mut out = Vec::new();
    for u in &perms {
        for v in &perms {
            let (lu, lv) = (u.length(), v.length());
            if lv >= lu && lv - lu <= max_length && u.bruhat_leq(v)? {
                out.push((*u, *v));
            }
        }
    }
    out.sort_by_key(|(u, v)| (v.length() - u.length(), *u, *v));
    Ok(out)
}

/// `count` random intervals `[u, v]` with `u < v`, drawn by picking `v`
/// uniformly and then `u` uniformly below it.
pub fn sample_intervals<R: Rng>(
    n: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<(Permutation, Permutation)>, CoxeterError> {
    let perms = Permutation::all(n)?;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = perms[rng.gen_range(0..perms.len())];
        let below: Vec<Permutation> = perms
            .iter()
            .filter(|u| **u != v && u.bruhat_leq(&v).unwrap_or(false))
            .copied()
            .collect();
        if below.is_empty() {
            continue;
        }
        out.push((below[rng.gen_range(0..below.len())], v));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Violated,
    FlipUndefined,
    Error,
}

/// Checks for one monomial of one interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialResult {
    pub monomial: String,
    pub coefficient: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_size: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_bar_size: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_s_m: Option<i64>,
    pub flip: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong_flip: Option<Status>,
    /// Reflections `t` at which the restricted counts disagree with the
    /// decomposition of the restricted sum.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restricted_mismatches: Vec<String>,
    pub consistent: bool,
}

/// One line of scan output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub u: String,
    pub v: String,
    pub length: usize,
    pub order: String,
    pub cd_index: BTreeMap<usize, BTreeMap<String, i64>>,
    pub monomials: Vec<MonomialResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

impl ScanRecord {
    pub fn key(&self) -> (usize, String, String) {
        (self.length, self.u.clone(), self.v.clone())
    }

    /// Flip-condition violations and count mismatches.
    pub fn violations(&self) -> usize {
        self.monomials
            .iter()
            .filter(|m| m.flip == Status::Violated || !m.consistent)
            .count()
    }

    pub fn strong_flip_violations(&self) -> usize {
        self.monomials
            .iter()
            .filter(|m| m.strong_flip == Some(Status::Violated))
            .count()
    }

    pub fn flip_undefined(&self) -> bool {
        self.monomials
            .iter()
            .any(|m| m.flip == Status::FlipUndefined || m.strong_flip == Some(Status::FlipUndefined))
    }

    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub order: ReflectionOrder,
    pub order_id: String,
    pub timing: bool,
}

fn status_of(result: &Result<FlipVerdict, FlipError>) -> Status {
    match result {
        Ok(FlipVerdict::Holds) => Status::Holds,
        Ok(FlipVerdict::Violated(_)) => Status::Violated,
        Err(FlipError::FlipUndefined { .. }) => Status::FlipUndefined,
        Err(_) => Status::Error,
    }
}

/// Runs every check on `[u, v]`.
pub fn evaluate(u: Permutation, v: Permutation, cfg: &ScanConfig) -> ScanRecord {
    let start = Instant::now();
    let mut record = ScanRecord {
        u: u.to_string(),
        v: v.to_string(),
        length: v.length().saturating_sub(u.length()),
        order: cfg.order_id.clone(),
        cd_index: BTreeMap::new(),
        monomials: Vec::new(),
        witnesses: Vec::new(),
        errors: Vec::new(),
        elapsed_us: None,
    };
    let iv = match BruhatInterval::build(u, v) {
        Ok(iv) => iv,
        Err(e) => {
            record.errors.push(e.to_string());
            return record;
        }
    };
    let psi = match complete_cd_index_under(&iv, &cfg.order) {
        Ok(psi) => psi,
        Err(e) => {
            record.errors.push(e.to_string());
            return record;
        }
    };
    record.cd_index = psi.to_report(&cfg.order_id).cd_index;
    let mut decompositions: Vec<ShellingDecomposition> = Vec::new();
    for &t in cfg.order.sequence() {
        match shelling_decomposition(&iv, t, &cfg.order) {
            Ok(d) => decompositions.push(d),
            Err(e) => record.errors.push(format!("decomposition at {t}: {e}")),
        }
    }
    let mut table = TSetTable::new(&iv, &cfg.order);
    for n in admissible_degrees(&iv) {
        for mono in cd_monomials(n) {
            let result = evaluate_monomial(&mut table, &mono, &psi, &decompositions, &mut record);
            record.monomials.push(result);
        }
    }
    if cfg.timing {
        record.elapsed_us = Some(start.elapsed().as_micros() as u64);
    }
    record
}

fn evaluate_monomial(
    table: &mut TSetTable,
    mono: &CdMonomial,
    psi: &crate::cdindex::CompleteCdIndex,
    decompositions: &[ShellingDecomposition],
    record: &mut ScanRecord,
) -> MonomialResult {
    let iv = table.interval().clone();
    let order = table.order().clone();
    let note = |record: &mut ScanRecord, result: &Result<FlipVerdict, FlipError>| match result {
        Ok(FlipVerdict::Violated(w)) => record.witnesses.push(w.to_record(&iv, mono, &order)),
        Err(e) => {
            if let Some(w) = WitnessRecord::size_mismatch(e) {
                record.witnesses.push(w);
            } else {
                record.errors.push(format!("{mono}: {e}"));
            }
        }
        Ok(FlipVerdict::Holds) => {}
    };
    let flip = table.check_flip_condition(mono);
    note(record, &flip);
    let strong = (mono.first() == Some(CdLetter::C)).then(|| table.check_strong_flip_condition(mono));
    if let Some(s) = &strong {
        note(record, s);
    }
    let mut result = MonomialResult {
        monomial: mono.to_string(),
        coefficient: psi.coefficient(mono),
        t_size: None,
        t_bar_size: None,
        sum_s_m: None,
        flip: status_of(&flip),
        strong_flip: strong.as_ref().map(status_of),
        restricted_mismatches: Vec::new(),
        consistent: true,
    };
    // The counting identities are only claimed where the flip condition holds.
    if result.flip != Status::Holds {
        return result;
    }
    match table.verify_coefficient(mono, psi) {
        Ok(r) => {
            result.consistent = r.is_consistent();
            result.t_size = Some(r.t_size);
            result.t_bar_size = Some(r.t_bar_size);
            result.sum_s_m = Some(r.sum_s_m);
        }
        Err(e) => {
            result.consistent = false;
            record.errors.push(format!("{mono}: {e}"));
        }
    }
    for dec in decompositions {
        match table.check_restricted_counts(mono, dec) {
            Ok(r) if r.is_consistent() => {}
            Ok(r) => result.restricted_mismatches.push(r.t),
            Err(e) => {
                result.restricted_mismatches.push(dec.t.to_string());
                record.errors.push(format!("{mono} at {}: {e}", dec.t));
            }
        }
    }
    if !result.restricted_mismatches.is_empty() {
        result.consistent = false;
    }
    result
}

pub fn evaluate_all_sequential(intervals: &[(Permutation, Permutation)], cfg: &ScanConfig) -> Vec<ScanRecord> {
    intervals.iter().map(|(u, v)| evaluate(*u, *v, cfg)).collect()
}

#[cfg(feature = "parallel")]
pub fn evaluate_all_parallel(intervals: &[(Permutation, Permutation)], cfg: &ScanConfig) -> Vec<ScanRecord> {
    use rayon::prelude::*;
    intervals.par_iter().map(|(u, v)| evaluate(*u, *v, cfg)).collect()
}

/// Parallel when built with the `parallel` feature, sequential otherwise.
pub fn evaluate_all(intervals: &[(Permutation, Permutation)], cfg: &ScanConfig) -> Vec<ScanRecord> {
    #[cfg(feature = "parallel")]
    {
        evaluate_all_parallel(intervals, cfg)
    }
    #[cfg(not(feature = "parallel"))]
    {
        evaluate_all_sequential(intervals, cfg)
    }
}

/// Runs `f` over `items` in input order, in parallel when available.
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// `(z, u, v, M')` for `z ≺ u <= v` and `cM'` of an admissible degree of
/// `[u, v]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VerdictKey {
    pub z: Permutation,
    pub u: Permutation,
    pub v: Permutation,
    pub m_prime: CdMonomial,
}

fn verdict_keys(iv: &BruhatInterval) -> Vec<(VerdictKey, crate::coxeter::Reflection)> {
    let u = iv.lower();
    let mut out = Vec::new();
    if iv.len() < 2 {
        return out;
    }
    for t in crate::coxeter::all_reflections(u.rank()) {
        let z = u.mul_reflection(t);
        if z.length() >= u.length() {
            continue;
        }
        for n in admissible_degrees(iv) {
            if n == 0 {
                continue;
            }
            for m_prime in cd_monomials(n - 1) {
                out.push((
                    VerdictKey {
                        z,
                        u,
                        v: iv.upper(),
                        m_prime,
                    },
                    t,
                ));
            }
        }
    }
    out
}

/// For each key, whether `z ≺ u ≺ x_1 ≺ ... ≺ v` violates the flip condition
/// for `[z, v]` and `dM'` at its first position, found from path sets and
/// flips.
pub fn flip_verdict_table(
    intervals: &[(Permutation, Permutation)],
    order: &ReflectionOrder,
) -> Result<BTreeMap<VerdictKey, bool>, FlipError> {
    let per_interval = map_ordered(intervals, |(u, v)| -> Result<Vec<(VerdictKey, bool)>, FlipError> {
        let iv = BruhatInterval::build(*u, *v).expect("comparable pair");
        let mut table = TSetTable::new(&iv, order);
        verdict_keys(&iv)
            .into_iter()
            .map(|(key, t)| {
                let violated = table.local_flip_violation(t, &key.m_prime)?;
                Ok((key, violated))
            })
            .collect()
    });
    let mut out = BTreeMap::new();
    for rows in per_interval {
        out.extend(rows?);
    }
    Ok(out)
}

/// For each key, whether the coefficient of `M'` in `g_{n-1}` of the
/// restricted sum at `t = z⁻¹u` is negative.
pub fn positivity_verdict_table(
    intervals: &[(Permutation, Permutation)],
    order: &ReflectionOrder,
) -> Result<BTreeMap<VerdictKey, bool>, crate::cdindex::CdIndexError> {
    let per_interval = map_ordered(intervals, |(u, v)| -> Result<Vec<(VerdictKey, bool)>, crate::cdindex::CdIndexError> {
        let iv = BruhatInterval::build(*u, *v).expect("comparable pair");
        let mut decs: BTreeMap<crate::coxeter::Reflection, ShellingDecomposition> = BTreeMap::new();
        let mut rows = Vec::new();
        for (key, t) in verdict_keys(&iv) {
            if !decs.contains_key(&t) {
                decs.insert(t, shelling_decomposition(&iv, t, order)?);
            }
            let n = key.m_prime.degree() + 1;
            let negative = decs[&t].g(n).coefficient(&key.m_prime) < 0;
            rows.push((key, negative));
        }
        Ok(rows)
    });
    let mut out = BTreeMap::new();
    for rows in per_interval {
        out.extend(rows?);
    }
    Ok(out)
}
