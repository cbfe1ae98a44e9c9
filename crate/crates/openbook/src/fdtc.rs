//! Fractional Dehn twist coefficients with certificates.
//!
//! The coefficient is bracketed by comparing iterated images of a base arc
//! against powers of the boundary twist: the exponent `k_n` with
//! `T^{k_n}(a) <= m^n(a) < T^{k_n+1}(a)` in the rightward order pins `c` into
//! `[k_n/n, (k_n+1)/n]`. Exactness comes from three routes: the intersection
//! of brackets degenerating to a point, a periodic power `m^n = T^k`, or a
//! witness pair certifying that `m^q T^{-p}` is neither right- nor
//! left-veering, which forces `c = p/q` by the quasimorphism laws.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::mapping::{boundary_twist, free_order, AnalyzeError, MappingClass, MoveError};
use crate::surface::{BasedArc, Triangulation};
use crate::veer::{compare_at_base, Side, VeerError};

#[derive(Debug, Error)]
pub enum FdtcError {
    #[error("map must be a boundary-fixing self-map of the fiber")]
    NotSelfMap,
    #[error("no labeled base arc at the marked vertex of component {0}")]
    NoBaseArc(usize),
    #[error("bracket exponent search failed to stabilize")]
    BracketSearch,
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Veer(#[from] VeerError),
    #[error(transparent)]
    Analyze(#[from] AnalyzeError),
    #[error(transparent)]
    Twist(#[from] crate::mapping::TwistError),
}

#[derive(Clone, Debug)]
pub struct FdtcConfig {
    /// Denominator bound used for isolation, from the fibered-knot theory.
    pub denom_bound: u64,
    /// Maximum number of bracketing iterations.
    pub max_iter: usize,
    /// Depth of the veering witness search.
    pub search_depth: usize,
    /// Deterministic shuffle seed for the witness search order.
    pub seed: u64,
    /// Whether the denominator bound is a theorem for this monodromy (the
    /// fibered-knot flag); only then does interval isolation alone certify.
    pub denominator_certain: bool,
    /// Largest power used when certifying a candidate by witnesses.
    pub cert_power_cap: i64,
    /// Cap on arc word growth before giving up on further brackets.
    pub max_arc_len: usize,
}

impl FdtcConfig {
    pub fn for_fiber(t: &Triangulation, fibered_knot: bool) -> FdtcConfig {
        let g = t.genus() as u64;
        FdtcConfig {
            denom_bound: (4 * g).saturating_sub(2).max(6),
            max_iter: 24,
            search_depth: 4,
            seed: 0,
            denominator_certain: fibered_knot,
            cert_power_cap: 8,
            max_arc_len: 4_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FdtcValue {
    Exact(BigRational),
    Indeterminate { lo: BigRational, hi: BigRational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertMethod {
    /// `m^n` is a pure boundary twist.
    Periodic {
        n: usize,
        k: i64,
    },
    /// Brackets intersected to a single point.
    Pinched,
    /// Witness pair for `m^q T^{-p}`.
    Witnesses {
        p: BigInt,
        q: u64,
    },
    /// Unique rational with bounded denominator inside the brackets.
    Isolated,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VeerVerdict {
    Right,
    Left,
    Neither,
}

#[derive(Clone, Debug)]
pub struct FdtcCertificate {
    pub value: FdtcValue,
    pub boundary: usize,
    pub brackets: Vec<(u64, BigInt)>,
    pub denom_bound: u64,
    pub veering: VeerVerdict,
    pub veering_witnessed: bool,
    pub witnesses: Vec<BasedArc>,
    pub method: CertMethod,
}

impl FdtcCertificate {
    pub fn exact(&self) -> Option<&BigRational> {
        match &self.value {
            FdtcValue::Exact(v) => Some(v),
            FdtcValue::Indeterminate { .. } => None,
        }
    }
}

/// The labeled base arc of a boundary component: the first label arc based
/// at its marked vertex.
pub fn base_arc(t: &Triangulation, component: usize) -> Option<BasedArc> {
    let v = t.marked_vertex(component);
    t.labels.arcs.values().find(|a| a.base == v).cloned()
}

struct TwistCache<'a> {
    t: &'a Triangulation,
    component: usize,
    images: BTreeMap<i64, BasedArc>,
}

impl<'a> TwistCache<'a> {
    fn new(t: &'a Triangulation, component: usize, base: BasedArc) -> TwistCache<'a> {
        let mut images = BTreeMap::new();
        images.insert(0, base);
        TwistCache {
            t,
            component,
            images,
        }
    }

    fn get(&mut self, k: i64) -> Result<BasedArc, FdtcError> {
        if let Some(a) = self.images.get(&k) {
            return Ok(a.clone());
        }
        // Extend from the nearest cached power.
        let (&near, _) = self
            .images
            .range(..)
            .min_by_key(|(&kk, _)| (kk - k).abs())
            .expect("cache nonempty");
        let mut cur = self.images[&near].clone();
        let step = if k > near { 1 } else { -1 };
        let tw = boundary_twist(self.t, self.component, step)?;
        let mut at = near;
        while at != k {
            cur = tw.apply_arc(self.t, &cur)?;
            at += step;
            self.images.insert(at, cur.clone());
        }
        Ok(cur)
    }
}

/// Computes the fractional Dehn twist coefficient of `m` at one boundary
/// component, with bracketing evidence and veering witnesses.
pub fn fdtc(
    t: &Triangulation,
    m: &MappingClass,
    boundary: usize,
    cfg: &FdtcConfig,
) -> Result<FdtcCertificate, FdtcError> {
    if !m.is_self_map() || m.source_fingerprint() != t.fingerprint() {
        return Err(FdtcError::NotSelfMap);
    }
    let base = base_arc(t, boundary).ok_or(FdtcError::NoBaseArc(boundary))?;

    // Periodic route: m^n a pure boundary twist gives c = k/n exactly.
    let periodic_cap = (4 * t.genus() + 4).min(cfg.max_iter.max(1));
    if let Some((n, k)) = free_order(t, m, periodic_cap)? {
        let value = BigRational::new(BigInt::from(k), BigInt::from(n as i64));
        let veering = verdict_of_sign(&value);
        return Ok(FdtcCertificate {
            value: FdtcValue::Exact(value),
            boundary,
            brackets: vec![(n as u64, BigInt::from(k))],
            denom_bound: cfg.denom_bound,
            veering,
            veering_witnessed: false,
            witnesses: Vec::new(),
            method: CertMethod::Periodic { n, k },
        });
    }

    let mut cache = TwistCache::new(t, boundary, base.clone());
    let mut brackets: Vec<(u64, BigInt)> = Vec::new();
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    let mut cur = base.clone();
    let mut failed_candidates: HashSet<BigRational> = HashSet::new();
    let mut k_prev: i64 = 0;

    for n in 1..=cfg.max_iter {
        cur = match m.apply_arc(t, &cur) {
            Ok(a) => a,
            Err(MoveError::ArcTooLong) => break,
            Err(e) => return Err(e.into()),
        };
        if cur.word.len() > cfg.max_arc_len {
            break;
        }
        let guess = if n == 1 {
            0
        } else {
            k_prev * n as i64 / (n as i64 - 1)
        };
        let k_n = bracket_exponent(t, &mut cache, &cur, guess)?;
        k_prev = k_n;
        brackets.push((n as u64, BigInt::from(k_n)));
        let this_lo = BigRational::new(BigInt::from(k_n), BigInt::from(n as i64));
        let this_hi = BigRational::new(BigInt::from(k_n + 1), BigInt::from(n as i64));
        lo = Some(match lo {
            None => this_lo.clone(),
            Some(old) => old.max(this_lo.clone()),
        });
        hi = Some(match hi {
            None => this_hi.clone(),
            Some(old) => old.min(this_hi.clone()),
        });
        let (l, h) = (lo.clone().unwrap(), hi.clone().unwrap());
        debug_assert!(l <= h, "bracket intervals stay consistent");

        if l == h {
            let veering = verdict_of_sign(&l);
            return Ok(FdtcCertificate {
                value: FdtcValue::Exact(l),
                boundary,
                brackets,
                denom_bound: cfg.denom_bound,
                veering,
                veering_witnessed: false,
                witnesses: Vec::new(),
                method: CertMethod::Pinched,
            });
        }
        let Some(cand) = simplest_in(&l, &h) else {
            continue;
        };
        let q = cand.denom().to_u64().unwrap_or(u64::MAX);
        if q as i64 <= cfg.cert_power_cap && !failed_candidates.contains(&cand) {
            if let Some(witnesses) = certify_value(t, m, boundary, &cand, cfg)? {
                let veering = verdict_of_sign(&cand);
                let witnessed = !witnesses.is_empty();
                let method = CertMethod::Witnesses {
                    p: cand_num(&cand),
                    q,
                };
                return Ok(FdtcCertificate {
                    value: FdtcValue::Exact(cand),
                    boundary,
                    brackets,
                    denom_bound: cfg.denom_bound,
                    veering,
                    veering_witnessed: witnessed,
                    witnesses,
                    method,
                });
            }
            failed_candidates.insert(cand.clone());
        }
        if cfg.denominator_certain
            && q <= cfg.denom_bound
            && unique_in_interval(&cand, &l, &h, cfg.denom_bound)
        {
            let veering = verdict_of_sign(&cand);
            return Ok(FdtcCertificate {
                value: FdtcValue::Exact(cand),
                boundary,
                brackets,
                denom_bound: cfg.denom_bound,
                veering,
                veering_witnessed: false,
                witnesses: Vec::new(),
                method: CertMethod::Isolated,
            });
        }
    }

    let lo = lo.unwrap_or_else(|| BigRational::from_integer((-1).into()));
    let hi = hi.unwrap_or_else(|| BigRational::from_integer(1.into()));
    let veering = if lo.is_positive() {
        VeerVerdict::Right
    } else if hi.is_negative() {
        VeerVerdict::Left
    } else {
        VeerVerdict::Neither
    };
    Ok(FdtcCertificate {
        value: FdtcValue::Indeterminate { lo, hi },
        boundary,
        brackets,
        denom_bound: cfg.denom_bound,
        veering,
        veering_witnessed: false,
        witnesses: Vec::new(),
        method: CertMethod::Indeterminate,
    })
}

fn cand_num(r: &BigRational) -> BigInt {
    r.numer().clone()
}

fn verdict_of_sign(v: &BigRational) -> VeerVerdict {
    if v.is_positive() {
        VeerVerdict::Right
    } else if v.is_negative() {
        VeerVerdict::Left
    } else {
        VeerVerdict::Neither
    }
}

/// Finds the integer `k` with `T^k(a) <= img < T^{k+1}(a)` in the rightward
/// order; monotonicity of the boundary twist action makes it unique.
fn bracket_exponent(
    t: &Triangulation,
    cache: &mut TwistCache,
    img: &BasedArc,
    guess: i64,
) -> Result<i64, FdtcError> {
    let mut k = guess;
    let mut steps = 0;
    loop {
        steps += 1;
        if steps > 10_000 {
            return Err(FdtcError::BracketSearch);
        }
        let at_k = cache.get(k)?;
        let side_k = compare_at_base(t, &at_k, img)?;
        if side_k == Side::Left {
            // img is strictly left of T^k: k too big.
            k -= 1;
            continue;
        }
        let at_k1 = cache.get(k + 1)?;
        let side_k1 = compare_at_base(t, &at_k1, img)?;
        match side_k1 {
            Side::Left => return Ok(k),
            _ => {
                k += 1;
                continue;
            }
        }
    }
}

/// Certifies `c(m) = p/q` by proving `c(m^q T^{-p}) = 0`: either the
/// composite is isotopic to the identity, or a pair of arcs moved strictly
/// to opposite sides rules out both veering signs.
fn certify_value(
    t: &Triangulation,
    m: &MappingClass,
    boundary: usize,
    cand: &BigRational,
    cfg: &FdtcConfig,
) -> Result<Option<Vec<BasedArc>>, FdtcError> {
    let q = cand.denom().to_i64().expect("small denominator");
    let p = cand.numer().to_i64().ok_or(FdtcError::BracketSearch)?;
    let g = m.pow(q)?.then(&boundary_twist(t, boundary, -p)?)?;
    if crate::mapping::is_identity(t, &g)? {
        return Ok(Some(Vec::new()));
    }
    // A based arc fixed by g pins every bracket exponent to zero, which
    // already forces c(g) = 0.
    let v = t.marked_vertex(boundary);
    for arc in t.labels.arcs.values() {
        if arc.base != v {
            continue;
        }
        if let Ok(img) = g.apply_arc(t, arc) {
            if img == *arc {
                return Ok(Some(vec![arc.clone()]));
            }
        }
    }
    Ok(witness_pair(t, &g, boundary, cfg)?)
}

/// Searches images of the labeled arcs under short twist words for one arc
/// moved strictly right and one moved strictly left.
pub fn witness_pair(
    t: &Triangulation,
    g: &MappingClass,
    boundary: usize,
    cfg: &FdtcConfig,
) -> Result<Option<Vec<BasedArc>>, FdtcError> {
    let v = t.marked_vertex(boundary);
    let seeds: Vec<BasedArc> = t
        .labels
        .arcs
        .values()
        .filter(|a| a.base == v)
        .cloned()
        .collect();
    let mut generators: Vec<MappingClass> = Vec::new();
    for c in t.labels.curves.values() {
        for sign in [1i64, -1] {
            if let Ok(tw) = crate::mapping::twist(t, c, sign) {
                generators.push(tw);
            }
        }
    }
    shuffle(&mut generators, cfg.seed);
    let mut right: Option<BasedArc> = None;
    let mut left: Option<BasedArc> = None;
    let mut seen: HashSet<BasedArc> = HashSet::new();
    let mut queue: VecDeque<(BasedArc, usize)> = VecDeque::new();
    for s in seeds {
        queue.push_back((s, 0));
    }
    while let Some((arc, depth)) = queue.pop_front() {
        if !seen.insert(arc.clone()) {
            continue;
        }
        if arc.base == v {
            let image = match g.apply_arc(t, &arc) {
                Ok(i) => i,
                Err(MoveError::ArcTooLong) => continue,
                Err(e) => return Err(e.into()),
            };
            match compare_at_base(t, &arc, &image)? {
                Side::Right => {
                    if right.is_none() {
                        right = Some(arc.clone());
                    }
                }
                Side::Left => {
                    if left.is_none() {
                        left = Some(arc.clone());
                    }
                }
                Side::Equal => {}
            }
            if let (Some(r), Some(l)) = (&right, &left) {
                return Ok(Some(vec![r.clone(), l.clone()]));
            }
        }
        if depth < cfg.search_depth {
            for gen in &generators {
                if let Ok(next) = gen.apply_arc(t, &arc) {
                    if next.word.len() <= cfg.max_arc_len.min(100_000) {
                        queue.push_back((next, depth + 1));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn shuffle<T>(items: &mut [T], seed: u64) {
    // splitmix64-driven Fisher-Yates, deterministic in the seed.
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    for i in (1..items.len()).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// The unique fraction of smallest denominator in the closed interval, when
/// the minimum is attained once (ties between integers return `None`).
pub fn simplest_in(lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
    if lo > hi {
        return None;
    }
    if lo == hi {
        return Some(lo.clone());
    }
    let cl = lo.ceil();
    let fh = hi.floor();
    if cl <= fh {
        if cl == fh {
            return Some(cl);
        }
        // Two or more integers: the minimal denominator is attained twice.
        return None;
    }
    Some(simplest_frac(lo, hi))
}

/// Stern-Brocot descent for the simplest fraction in an interval without the
/// top-level ambiguity check: inside the recursion the smallest admissible
/// integer part always wins.
fn simplest_frac(lo: &BigRational, hi: &BigRational) -> BigRational {
    let cl = lo.ceil();
    if &cl <= &hi.floor() || &cl == hi {
        return cl;
    }
    let a = lo.floor();
    let f_lo = lo - &a;
    let f_hi = hi - &a;
    let inner = simplest_frac(&f_hi.recip(), &f_lo.recip());
    a + inner.recip()
}

/// Whether `r` is the only rational with denominator at most `d` inside the
/// closed interval `[lo, hi]`.
pub fn unique_in_interval(r: &BigRational, lo: &BigRational, hi: &BigRational, d: u64) -> bool {
    let mut below: Option<BigRational> = None;
    let mut above: Option<BigRational> = None;
    for q in 1..=d {
        let qb = BigInt::from(q);
        let scaled = r * BigRational::from_integer(qb.clone());
        let fl = scaled.floor().numer().clone();
        let p_below = if scaled.is_integer() {
            fl.clone() - BigInt::one()
        } else {
            fl.clone()
        };
        let cand_b = BigRational::new(p_below, qb.clone());
        below = Some(match below {
            None => cand_b.clone(),
            Some(old) => old.max(cand_b),
        });
        let p_above = if scaled.is_integer() {
            fl + BigInt::one()
        } else {
            scaled.ceil().numer().clone()
        };
        let cand_a = BigRational::new(p_above, qb);
        above = Some(match above {
            None => cand_a.clone(),
            Some(old) => old.min(cand_a),
        });
    }
    below.map(|b| b < *lo).unwrap_or(false) && above.map(|a| a > *hi).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn simplest_fraction_search() {
        assert_eq!(simplest_in(&rat(11, 23), &rat(12, 23)), Some(rat(1, 2)));
        assert_eq!(simplest_in(&rat(0, 1), &rat(1, 1)), None);
        assert_eq!(simplest_in(&rat(1, 7), &rat(1, 5)), Some(rat(1, 5)));
        assert_eq!(simplest_in(&rat(2, 13), &rat(2, 11)), Some(rat(1, 6)));
        assert_eq!(simplest_in(&rat(-1, 3), &rat(1, 3)), Some(rat(0, 1)));
        assert_eq!(simplest_in(&rat(5, 2), &rat(5, 2)), Some(rat(5, 2)));
    }

    #[test]
    fn uniqueness_window() {
        assert!(unique_in_interval(
            &rat(1, 2),
            &rat(11, 23),
            &rat(12, 23),
            22
        ));
        assert!(!unique_in_interval(
            &rat(1, 2),
            &rat(10, 21),
            &rat(12, 23),
            22
        ));
        assert!(unique_in_interval(
            &rat(0, 1),
            &rat(-1, 11),
            &rat(1, 11),
            10
        ));
    }
}

/// The veering verdict of a monodromy at one boundary component, per the
/// sign of the coefficient; at zero the verdict is Neither, witnessed by a
/// right-moved and a left-moved arc when the search finds them.
pub fn veering(
    t: &Triangulation,
    m: &MappingClass,
    boundary: usize,
    cfg: &FdtcConfig,
) -> Result<(VeerVerdict, Vec<BasedArc>, bool), FdtcError> {
    let cert = fdtc(t, m, boundary, cfg)?;
    match &cert.value {
        FdtcValue::Exact(v) => {
            if v.is_positive() {
                return Ok((VeerVerdict::Right, Vec::new(), true));
            }
            if v.is_negative() {
                return Ok((VeerVerdict::Left, Vec::new(), true));
            }
            if cert.veering_witnessed && cert.witnesses.len() == 2 {
                return Ok((VeerVerdict::Neither, cert.witnesses, true));
            }
            // Search the map itself for a two-sided witness pair.
            match witness_pair(t, m, boundary, cfg)? {
                Some(w) if w.len() == 2 => Ok((VeerVerdict::Neither, w, true)),
                _ => Ok((VeerVerdict::Neither, Vec::new(), false)),
            }
        }
        FdtcValue::Indeterminate { lo, hi } => {
            if lo.is_positive() {
                return Ok((VeerVerdict::Right, Vec::new(), true));
            }
            if hi.is_negative() {
                return Ok((VeerVerdict::Left, Vec::new(), true));
            }
            match witness_pair(t, m, boundary, cfg)? {
                Some(w) if w.len() == 2 => Ok((VeerVerdict::Neither, w, true)),
                _ => Ok((VeerVerdict::Neither, Vec::new(), false)),
            }
        }
    }
}
