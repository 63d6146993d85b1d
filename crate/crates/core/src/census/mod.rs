//! Box enumeration engine: classifies every pair (a, b) in an annular box,
//! aggregates membership counters, R0 statistics, bad pairs and collisions
//! into a deterministic report, and persists chunked progress for resume.

pub mod cache;
pub mod stats;

use crate::error::{Error, Result};
use crate::integers::{factorize_with, iroot_u128, FactorContext};
use crate::trinomial::{
    disc_t, irreducible_over_q_with, mirror_product_h, osada_coprime, Certificate,
    IrreducibilityVerdict, DEFAULT_PRIME_BUDGET,
};
use cache::{CacheHeader, CacheRecord, CensusCache, ChunkMarker};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use stats::{Collision, DiscEntry, DiscKey, R0Stats};
use std::collections::BTreeMap;
use std::collections::HashSet;
use std::path::PathBuf;
use std::time::Instant;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hard ceiling on enumerable pairs; larger boxes are out of scope.
pub const MAX_BOX_PAIRS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    /// A <= |a| <= 2A and B <= |b| <= 2B (the default box).
    BothSigns,
    /// A <= a <= 2A with B <= |b| <= 2B (the sieve-section box).
    PositiveA,
}

impl Quadrant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quadrant::BothSigns => "both-signs",
            Quadrant::PositiveA => "positive-a",
        }
    }
}

/// The annular census box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusBox {
    pub n: u32,
    pub a_min: u64,
    pub b_min: u64,
    pub delta0: f64,
    pub quadrant: Quadrant,
}

impl CensusBox {
    pub fn new(n: u32, a_min: u64, b_min: u64) -> Result<Self> {
        if n < 5 || n % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "census degree must be odd and >= 5, got {n}"
            )));
        }
        if a_min < 1 || b_min < 1 {
            return Err(Error::InvalidArgument("need A >= 1 and B >= 1".into()));
        }
        if a_min > i64::MAX as u64 / 4 || b_min > i64::MAX as u64 / 4 {
            return Err(Error::UnsupportedRange("box bounds overflow i64".into()));
        }
        Ok(CensusBox {
            n,
            a_min,
            b_min,
            delta0: 0.5,
            quadrant: Quadrant::BothSigns,
        })
    }

    pub fn with_delta0(mut self, delta0: f64) -> Self {
        self.delta0 = delta0;
        self
    }

    pub fn with_quadrant(mut self, quadrant: Quadrant) -> Self {
        self.quadrant = quadrant;
        self
    }

    /// Theorem-mode hypothesis B > A^(1+delta0).
    pub fn b_range_ok(&self) -> bool {
        (self.b_min as f64) > (self.a_min as f64).powf(1.0 + self.delta0)
    }

    /// Theorem-mode hypothesis n = 1 mod 4 (D_f = T there).
    pub fn n_mod4_ok(&self) -> bool {
        self.n % 4 == 1
    }

    /// a values in enumeration order: the negative range ascending, then the
    /// positive range ascending (positive only for [`Quadrant::PositiveA`]).
    pub fn a_values(&self) -> Vec<i64> {
        let (lo, hi) = (self.a_min as i64, 2 * self.a_min as i64);
        let mut out = Vec::new();
        if self.quadrant == Quadrant::BothSigns {
            out.extend(-hi..=-lo);
        }
        out.extend(lo..=hi);
        out
    }

    /// b values in enumeration order (negative range, then positive range).
    pub fn b_values(&self) -> Vec<i64> {
        let (lo, hi) = (self.b_min as i64, 2 * self.b_min as i64);
        let mut out: Vec<i64> = (-hi..=-lo).collect();
        out.extend(lo..=hi);
        out
    }

    pub fn total_pairs(&self) -> u64 {
        self.a_values().len() as u64 * self.b_values().len() as u64
    }

    /// Every pair exactly once: a ascending over both sign ranges, then b.
    pub fn enumerate(&self) -> impl Iterator<Item = (i64, i64)> {
        let b_vals = self.b_values();
        self.a_values()
            .into_iter()
            .flat_map(move |a| b_vals.clone().into_iter().map(move |b| (a, b)))
    }
}

/// Full classification of one pair.
#[derive(Debug, Clone)]
pub struct PairRecord {
    pub a: i64,
    pub b: i64,
    pub disc: BigInt,
    /// None exactly when disc = 0.
    pub disc_squarefree: Option<bool>,
    pub verdict: IrreducibilityVerdict,
    pub osada: bool,
    /// Some prime p > threshold has p^2 | T(a,b).
    pub bad: bool,
    pub member: bool,
}

impl PairRecord {
    pub fn to_cache_record(&self) -> CacheRecord {
        let (verdict, certificate) = match &self.verdict {
            IrreducibilityVerdict::Irreducible(Certificate::Prime(p)) => {
                ("irreducible".to_string(), p.to_string())
            }
            IrreducibilityVerdict::Irreducible(Certificate::ExhaustiveSearch) => {
                ("irreducible".to_string(), "exhaustive-search".to_string())
            }
            IrreducibilityVerdict::Reducible(g) => {
                let coeffs: Vec<String> = g.coeffs().iter().map(|c| c.to_string()).collect();
                ("reducible".to_string(), format!("factor:{}", coeffs.join(",")))
            }
            IrreducibilityVerdict::Unresolved { primes_tried } => {
                ("unresolved".to_string(), format!("tried:{primes_tried}"))
            }
        };
        CacheRecord {
            a: self.a,
            b: self.b,
            disc: self.disc.to_string(),
            squarefree: self.disc_squarefree,
            verdict,
            certificate,
            osada: self.osada,
            bad: self.bad,
            member: self.member,
        }
    }
}

/// Classifies one pair with the default budget and factor context.
pub fn classify_pair(n: u32, a: i64, b: i64, bad_threshold: u64) -> PairRecord {
    let ctx = FactorContext::default();
    classify_pair_cfg(n, a, b, bad_threshold, DEFAULT_PRIME_BUDGET, true, &ctx)
}

fn classify_pair_cfg(
    n: u32,
    a: i64,
    b: i64,
    bad_threshold: u64,
    prime_budget: u32,
    exact_fallback: bool,
    ctx: &FactorContext,
) -> PairRecord {
    let disc = disc_t(n, a, b);
    let (disc_squarefree, bad) = if disc.is_zero() {
        (None, false)
    } else {
        let f = factorize_with(&disc, ctx).expect("disc != 0");
        let thr = BigUint::from(bad_threshold);
        (
            Some(f.is_squarefree()),
            f.square_prime_above(&thr).is_some(),
        )
    };
    let verdict = irreducible_over_q_with(n, a, b, prime_budget, exact_fallback);
    let osada = osada_coprime(n, a, b);
    let member = verdict.is_irreducible() && disc_squarefree == Some(true);
    PairRecord { a, b, disc, disc_squarefree, verdict, osada, bad, member }
}

/// Everything that tunes a census run; results never depend on `jobs` or
/// `chunk_limit`.
#[derive(Debug, Clone)]
pub struct CensusConfig {
    pub prime_budget: u32,
    pub exact_fallback: bool,
    /// Bad-pair prime threshold; defaults to B per the sieve argument.
    pub bad_threshold: Option<u64>,
    pub jobs: usize,
    pub cache_path: Option<PathBuf>,
    /// a values per chunk.
    pub chunk_size: u64,
    /// Process at most this many new chunks, then stop with a partial
    /// outcome (exercises the kill/resume path; also a resource limit).
    pub chunk_limit: Option<usize>,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            prime_budget: DEFAULT_PRIME_BUDGET,
            exact_fallback: true,
            bad_threshold: None,
            jobs: std::thread::available_parallelism().map_or(1, |v| v.get()),
            cache_path: None,
            chunk_size: 16,
            chunk_limit: None,
        }
    }
}

/// A positive-a pair whose mirror is also bad: both T(a,b) and T(-a,b)
/// divisible by the square of a prime above the threshold.
#[derive(Debug, Clone, Serialize)]
pub struct DoubleBad {
    pub a: i64,
    pub b: i64,
    pub t_pos: String,
    pub t_neg: String,
    pub t_pos_factors: String,
    pub t_neg_factors: String,
    /// Square primes above threshold witnessing badness on each side.
    pub p: String,
    pub q: String,
    pub p_equals_q: bool,
    /// When p = q, whether p divides T(a,b) + T(-a,b) (the exclusion the
    /// sieve argument leans on).
    pub p_divides_sum: Option<bool>,
}

/// The aggregated census over a box.
#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub census: String,
    pub version: String,
    pub n: u32,
    pub a_min: u64,
    pub b_min: u64,
    pub delta0: f64,
    pub quadrant: String,
    pub bad_threshold: u64,
    pub prime_budget: u32,
    pub exact_fallback: bool,
    pub theorem_n_mod4_ok: bool,
    pub theorem_b_range_ok: bool,
    /// Set when either theorem-mode hypothesis fails.
    pub exploratory: bool,
    pub total_pairs: u64,
    pub irreducible_count: u64,
    pub reducible_count: u64,
    pub unresolved_count: u64,
    pub member_count: u64,
    pub zero_disc_count: u64,
    pub squarefree_disc_count: u64,
    pub osada_pass_count: u64,
    pub distinct_d: u64,
    pub sum_r0: u64,
    pub sum_r0_sq: u64,
    pub r0_histogram: BTreeMap<u64, u64>,
    pub r0_raw_histogram: BTreeMap<u64, u64>,
    pub bad_pair_count: u64,
    pub double_bad_pairs: Vec<DoubleBad>,
    pub collision_count: u64,
    pub collisions: Vec<Collision>,
    pub chunks: Vec<ChunkMarker>,
    /// Wall time never enters the canonical serialization: reports must be
    /// byte-identical across worker counts and resume cycles.
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl CensusReport {
    /// The deterministic serialized form used for persistence and for the
    /// byte-identity checks.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("report json")
    }
}

#[derive(Debug)]
pub enum CensusOutcome {
    Complete(Box<CensusReport>),
    /// Resource limit hit; committed chunks are persisted when a cache path
    /// was configured.
    Partial { chunks_done: usize, chunks_total: usize },
}

impl CensusOutcome {
    pub fn report(&self) -> Option<&CensusReport> {
        match self {
            CensusOutcome::Complete(r) => Some(r),
            CensusOutcome::Partial { .. } => None,
        }
    }
}

#[derive(Default)]
struct ChunkAgg {
    pairs: u64,
    irreducible: u64,
    reducible: u64,
    unresolved: u64,
    member: u64,
    osada_pass: u64,
    zero_disc: u64,
    squarefree_disc: u64,
    bad_count: u64,
    bad_pairs: Vec<(i64, i64)>,
    entries: Vec<DiscEntry>,
}

impl ChunkAgg {
    fn push_record(&mut self, r: &PairRecord) {
        self.pairs += 1;
        match &r.verdict {
            IrreducibilityVerdict::Irreducible(_) => self.irreducible += 1,
            IrreducibilityVerdict::Reducible(_) => self.reducible += 1,
            IrreducibilityVerdict::Unresolved { .. } => self.unresolved += 1,
        }
        if r.member {
            self.member += 1;
        }
        if r.osada {
            self.osada_pass += 1;
        }
        match r.disc_squarefree {
            None => self.zero_disc += 1,
            Some(true) => self.squarefree_disc += 1,
            Some(false) => {}
        }
        if r.bad {
            self.bad_count += 1;
            self.bad_pairs.push((r.a, r.b));
        }
        if !r.disc.is_zero() {
            self.entries.push(DiscEntry {
                key: DiscKey::from_bigint(&r.disc),
                a: r.a,
                b: r.b,
                squarefree: r.disc_squarefree == Some(true),
                osada: r.osada,
                member: r.member,
            });
        }
    }

    fn push_cache_record(&mut self, r: &CacheRecord) -> Result<()> {
        self.pairs += 1;
        match r.verdict.as_str() {
            "irreducible" => self.irreducible += 1,
            "reducible" => self.reducible += 1,
            "unresolved" => self.unresolved += 1,
            other => {
                return Err(Error::CacheCorrupt(format!("unknown verdict {other:?}")));
            }
        }
        if r.member {
            self.member += 1;
        }
        if r.osada {
            self.osada_pass += 1;
        }
        match r.squarefree {
            None => self.zero_disc += 1,
            Some(true) => self.squarefree_disc += 1,
            Some(false) => {}
        }
        if r.bad {
            self.bad_count += 1;
            self.bad_pairs.push((r.a, r.b));
        }
        let disc: BigInt = r
            .disc
            .parse()
            .map_err(|e| Error::CacheCorrupt(format!("bad disc {:?}: {e}", r.disc)))?;
        if !disc.is_zero() {
            self.entries.push(DiscEntry {
                key: DiscKey::from_bigint(&disc),
                a: r.a,
                b: r.b,
                squarefree: r.squarefree == Some(true),
                osada: r.osada,
                member: r.member,
            });
        }
        Ok(())
    }

    fn merge(&mut self, other: ChunkAgg) {
        self.pairs += other.pairs;
        self.irreducible += other.irreducible;
        self.reducible += other.reducible;
        self.unresolved += other.unresolved;
        self.member += other.member;
        self.osada_pass += other.osada_pass;
        self.zero_disc += other.zero_disc;
        self.squarefree_disc += other.squarefree_disc;
        self.bad_count += other.bad_count;
        self.bad_pairs.extend(other.bad_pairs);
        self.entries.extend(other.entries);
    }
}

fn cache_header(census_box: &CensusBox, cfg: &CensusConfig, bad_threshold: u64) -> CacheHeader {
    CacheHeader {
        census: "trinodisc-box".into(),
        version: CODE_VERSION.into(),
        n: census_box.n,
        a_min: census_box.a_min,
        b_min: census_box.b_min,
        delta0: census_box.delta0,
        quadrant: census_box.quadrant.as_str().into(),
        bad_threshold,
        prime_budget: cfg.prime_budget,
        exact_fallback: cfg.exact_fallback,
        chunk_size: cfg.chunk_size,
    }
}

struct CoreOutcome {
    report: CensusReport,
    entries: Vec<DiscEntry>,
}

enum CoreResult {
    Complete(CoreOutcome),
    Partial { chunks_done: usize, chunks_total: usize },
}

/// Runs the census; the report is identical for any jobs/chunk_limit/resume
/// schedule.
pub fn run_census(census_box: &CensusBox, cfg: &CensusConfig) -> Result<CensusOutcome> {
    match census_core(census_box, cfg)? {
        CoreResult::Complete(core) => Ok(CensusOutcome::Complete(Box::new(core.report))),
        CoreResult::Partial { chunks_done, chunks_total } => {
            Ok(CensusOutcome::Partial { chunks_done, chunks_total })
        }
    }
}

fn census_core(census_box: &CensusBox, cfg: &CensusConfig) -> Result<CoreResult> {
    let start = Instant::now();
    let total = census_box.total_pairs();
    if total > MAX_BOX_PAIRS {
        return Err(Error::UnsupportedRange(format!(
            "box has {total} pairs; the census is capped at {MAX_BOX_PAIRS}"
        )));
    }
    let bad_threshold = cfg.bad_threshold.unwrap_or(census_box.b_min);
    let a_values = census_box.a_values();
    let b_values = census_box.b_values();
    let chunk_size = cfg.chunk_size.max(1) as usize;
    let chunk_ranges: Vec<&[i64]> = a_values.chunks(chunk_size).collect();
    let chunks_total = chunk_ranges.len();

    let header = cache_header(census_box, cfg, bad_threshold);
    let mut resumed: Vec<(ChunkMarker, Vec<CacheRecord>)> = Vec::new();
    let mut cache = match &cfg.cache_path {
        Some(path) if path.exists() => {
            let (cache, state) = CensusCache::resume(path, &header)?;
            resumed = state.chunks;
            Some(cache)
        }
        Some(path) => Some(CensusCache::create(path, &header)?),
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;

    let ctx = FactorContext::default();
    let mut agg = ChunkAgg::default();
    let mut markers: Vec<ChunkMarker> = Vec::new();
    let mut new_chunks = 0usize;

    for (idx, chunk_a) in chunk_ranges.iter().enumerate() {
        let expect_marker = |records: u64| ChunkMarker {
            chunk: idx as u32,
            a_lo: chunk_a[0],
            a_hi: *chunk_a.last().unwrap(),
            records,
        };
        if let Some((marker, records)) = resumed.get(idx) {
            let expected = expect_marker(records.len() as u64);
            if *marker != expected {
                return Err(Error::CacheCorrupt(format!(
                    "resumed chunk {idx} does not match the expected layout: {marker:?} vs {expected:?}"
                )));
            }
            for r in records {
                agg.push_cache_record(r)?;
            }
            markers.push(marker.clone());
            continue;
        }
        if let Some(limit) = cfg.chunk_limit {
            if new_chunks >= limit {
                return Ok(CoreResult::Partial { chunks_done: idx, chunks_total });
            }
        }

        let keep_records = cache.is_some();
        let per_a: Vec<(ChunkAgg, Vec<CacheRecord>)> = pool.install(|| {
            chunk_a
                .par_iter()
                .map(|&a| {
                    let mut local = ChunkAgg::default();
                    let mut records = Vec::new();
                    for &b in &b_values {
                        let rec = classify_pair_cfg(
                            census_box.n,
                            a,
                            b,
                            bad_threshold,
                            cfg.prime_budget,
                            cfg.exact_fallback,
                            &ctx,
                        );
                        local.push_record(&rec);
                        if keep_records {
                            records.push(rec.to_cache_record());
                        }
                    }
                    (local, records)
                })
                .collect()
        });

        let mut chunk_records = Vec::new();
        let mut chunk_pairs = 0u64;
        for (local, records) in per_a {
            chunk_pairs += local.pairs;
            agg.merge(local);
            chunk_records.extend(records);
        }
        let marker = expect_marker(chunk_pairs);
        if let Some(cache) = cache.as_mut() {
            cache.commit_chunk(&marker, &chunk_records)?;
        }
        markers.push(marker);
        new_chunks += 1;
    }

    // d-grouped statistics and cross-collisions
    let mut entries = std::mem::take(&mut agg.entries);
    let r0 = stats::finalize(&mut entries);

    // double-bad resolution over positive-a bad pairs
    let bad_set: HashSet<(i64, i64)> = agg.bad_pairs.iter().copied().collect();
    let mut double_bad = Vec::new();
    for &(a, b) in agg.bad_pairs.iter().filter(|(a, _)| *a > 0) {
        let mirror_bad = match census_box.quadrant {
            Quadrant::BothSigns => bad_set.contains(&(-a, b)),
            Quadrant::PositiveA => {
                let t_neg = disc_t(census_box.n, -a, b);
                !t_neg.is_zero()
                    && factorize_with(&t_neg, &ctx)?
                        .square_prime_above(&BigUint::from(bad_threshold))
                        .is_some()
            }
        };
        if mirror_bad {
            double_bad.push(make_double_bad(census_box.n, a, b, bad_threshold, &ctx)?);
        }
    }
    double_bad.sort_by_key(|d| (d.a, d.b));

    let report = CensusReport {
        census: "trinodisc-box".into(),
        version: CODE_VERSION.into(),
        n: census_box.n,
        a_min: census_box.a_min,
        b_min: census_box.b_min,
        delta0: census_box.delta0,
        quadrant: census_box.quadrant.as_str().into(),
        bad_threshold,
        prime_budget: cfg.prime_budget,
        exact_fallback: cfg.exact_fallback,
        theorem_n_mod4_ok: census_box.n_mod4_ok(),
        theorem_b_range_ok: census_box.b_range_ok(),
        exploratory: !(census_box.n_mod4_ok() && census_box.b_range_ok()),
        total_pairs: agg.pairs,
        irreducible_count: agg.irreducible,
        reducible_count: agg.reducible,
        unresolved_count: agg.unresolved,
        member_count: agg.member,
        zero_disc_count: agg.zero_disc,
        squarefree_disc_count: agg.squarefree_disc,
        osada_pass_count: agg.osada_pass,
        distinct_d: r0.distinct_d,
        sum_r0: r0.sum_r0,
        sum_r0_sq: r0.sum_r0_sq,
        r0_histogram: r0.histogram,
        r0_raw_histogram: r0.raw_histogram,
        bad_pair_count: agg.bad_count,
        double_bad_pairs: double_bad,
        collision_count: r0.collision_count,
        collisions: r0.collisions,
        chunks: markers,
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    debug_assert_eq!(report.member_count, r0.member_pair_sum);
    Ok(CoreResult::Complete(CoreOutcome { report, entries }))
}

fn make_double_bad(
    n: u32,
    a: i64,
    b: i64,
    threshold: u64,
    ctx: &FactorContext,
) -> Result<DoubleBad> {
    let t_pos = disc_t(n, a, b);
    let t_neg = disc_t(n, -a, b);
    let f_pos = factorize_with(&t_pos, ctx)?;
    let f_neg = factorize_with(&t_neg, ctx)?;
    let thr = BigUint::from(threshold);
    let p = f_pos.square_prime_above(&thr).expect("bad pair").clone();
    let q = f_neg.square_prime_above(&thr).expect("bad pair").clone();
    let p_equals_q = p == q;
    let p_divides_sum = if p_equals_q {
        let sum = &t_pos + &t_neg;
        Some((sum % BigInt::from(p.clone())).is_zero())
    } else {
        None
    };
    Ok(DoubleBad {
        a,
        b,
        t_pos: t_pos.to_string(),
        t_neg: t_neg.to_string(),
        t_pos_factors: f_pos.to_string(),
        t_neg_factors: f_neg.to_string(),
        p: p.to_string(),
        q: q.to_string(),
        p_equals_q,
        p_divides_sum,
    })
}

/// R0 statistics straight from the box: squarefree d = T(a,b) with the
/// gcd((n-1)a, nb) = 1 side condition, plus the raw variant and the full
/// cross-collision list. No irreducibility work.
pub fn r0_statistics(census_box: &CensusBox) -> Result<R0Stats> {
    let total = census_box.total_pairs();
    if total > MAX_BOX_PAIRS {
        return Err(Error::UnsupportedRange(format!(
            "box has {total} pairs; the census is capped at {MAX_BOX_PAIRS}"
        )));
    }
    let ctx = FactorContext::default();
    let mut entries = Vec::new();
    for (a, b) in census_box.enumerate() {
        let disc = disc_t(census_box.n, a, b);
        if disc.is_zero() {
            continue;
        }
        let f = factorize_with(&disc, &ctx)?;
        entries.push(DiscEntry {
            key: DiscKey::from_bigint(&disc),
            a,
            b,
            squarefree: f.is_squarefree(),
            osada: osada_coprime(census_box.n, a, b),
            // member needs the irreducibility verdict; this pass does not
            // compute verdicts, so member_pair_sum is meaningful only when
            // the stats come out of run_census.
            member: false,
        });
    }
    Ok(stats::finalize(&mut entries))
}

/// Scans the positive-a box for pairs where T(a,b) and T(-a,b) are both
/// divisible by the square of a prime above the threshold. Every hit is
/// returned with full factorizations.
pub fn bad_pair_scan(census_box: &CensusBox, threshold: u64) -> Result<Vec<DoubleBad>> {
    let ctx = FactorContext::default();
    let thr = BigUint::from(threshold);
    let mut hits = Vec::new();
    let a_lo = census_box.a_min as i64;
    let a_hi = 2 * census_box.a_min as i64;
    for a in a_lo..=a_hi {
        for b in census_box.b_values() {
            let t_pos = disc_t(census_box.n, a, b);
            if t_pos.is_zero() {
                continue;
            }
            if factorize_with(&t_pos, &ctx)?.square_prime_above(&thr).is_none() {
                continue;
            }
            let t_neg = disc_t(census_box.n, -a, b);
            if t_neg.is_zero() {
                continue;
            }
            if factorize_with(&t_neg, &ctx)?.square_prime_above(&thr).is_some() {
                hits.push(make_double_bad(census_box.n, a, b, threshold, &ctx)?);
            }
        }
    }
    Ok(hits)
}

/// An abc triple (u, v, w) with u + v = w, gcd-normalized, and its quality.
#[derive(Debug, Clone, Serialize)]
pub struct AbcQuality {
    pub n: u32,
    pub a: i64,
    pub b: i64,
    pub triple: [String; 3],
    pub radical: String,
    pub quality: f64,
}

/// Builds the abc triple from the identity
/// (n-1)^(2(n-1)) a^(2n) + H(a,b) = n^(2n) b^(2(n-1)) and computes
/// q = ln(max) / ln(rad(product)).
pub fn abc_quality(n: u32, a: i64, b: i64) -> Result<AbcQuality> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument(format!(
            "abc triple degenerates when a or b is 0 (a={a}, b={b})"
        )));
    }
    let x = BigInt::from(n - 1).pow(2 * (n - 1)) * BigInt::from(a).pow(2 * n);
    let y = mirror_product_h(n, a, b);
    let z = BigInt::from(n).pow(2 * n) * BigInt::from(b).pow(2 * (n - 1));
    if y.is_zero() {
        return Err(Error::UndefinedQuality { n, a, b });
    }
    debug_assert_eq!(&x + &y, z);
    // arrange as u + v = w with all three positive
    let (u, v, w) = if y.is_positive() {
        (x, y.clone(), z)
    } else {
        (z, -y.clone(), x)
    };
    let g = gcd_big(&gcd_big(&u, &v), &w);
    let (u, v, w) = (&u / &g, &v / &g, &w / &g);
    let ctx = FactorContext::default();
    let rad = factorize_with(&u, &ctx)?.radical()
        * factorize_with(&v, &ctx)?.radical()
        * factorize_with(&w, &ctx)?.radical();
    let quality = ln_biguint(w.magnitude()) / ln_biguint(&rad);
    Ok(AbcQuality {
        n,
        a,
        b,
        triple: [u.to_string(), v.to_string(), w.to_string()],
        radical: rad.to_string(),
        quality,
    })
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::gcd(a, b)
}

/// Natural log of a positive big integer via its top bits.
fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        let v = x.to_u64_digits().first().copied().unwrap_or(0);
        return (v as f64).ln();
    }
    let shift = bits - 53;
    let top: BigUint = x >> shift;
    let mant = top.to_u64_digits()[0] as f64;
    mant.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Quality scan over the positive quadrant a in [A, 2A], b in [B, 2B]
/// (quality is invariant under both sign flips). `listed` carries every
/// triple with quality >= min_quality sorted by descending quality;
/// `high_quality` always carries every q > 1 hit regardless of the floor.
#[derive(Debug, Clone, Serialize)]
pub struct AbcScan {
    pub listed: Vec<AbcQuality>,
    pub high_quality: Vec<AbcQuality>,
}

pub fn abc_scan(n: u32, a_min: u64, b_min: u64, min_quality: f64) -> Result<AbcScan> {
    let pairs = (a_min + 1) as u128 * (b_min + 1) as u128;
    if pairs > MAX_BOX_PAIRS as u128 {
        return Err(Error::UnsupportedRange(format!(
            "abc scan over {pairs} pairs exceeds the cap"
        )));
    }
    let mut listed = Vec::new();
    let mut high = Vec::new();
    for a in a_min as i64..=2 * a_min as i64 {
        for b in b_min as i64..=2 * b_min as i64 {
            let q = match abc_quality(n, a, b) {
                Ok(q) => q,
                Err(Error::UndefinedQuality { .. }) => continue,
                Err(e) => return Err(e),
            };
            if q.quality > 1.0 {
                high.push(q.clone());
            }
            if q.quality >= min_quality {
                listed.push(q);
            }
        }
    }
    let by_quality = |x: &AbcQuality, y: &AbcQuality| {
        y.quality
            .partial_cmp(&x.quality)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
    };
    listed.sort_by(by_quality);
    high.sort_by(by_quality);
    Ok(AbcScan { listed, high_quality: high })
}

/// Distinct squarefree discriminants counted by [`count_fields`].
#[derive(Debug, Clone, Serialize)]
pub struct FieldCount {
    pub n: u32,
    pub x: u64,
    pub a_min: u64,
    pub b_min: u64,
    /// Distinct squarefree d = D_f over member pairs passing the Osada
    /// coprimality with |d| <= X; one quadratic field Q(sqrt(d)) each.
    pub n_fields: u64,
    pub report: CensusReport,
}

#[derive(Debug)]
pub enum FieldOutcome {
    Complete(Box<FieldCount>),
    Partial { chunks_done: usize, chunks_total: usize },
}

/// Derives A = floor(X^(1/n) / 4n), B = floor(X^(1/(n-1)) / 4n^2), runs the
/// census and counts distinct discriminants.
pub fn count_fields(n: u32, x: u64, cfg: &CensusConfig) -> Result<FieldOutcome> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "field count needs odd n >= 5, got {n}"
        )));
    }
    let a_min = iroot_u128(x as u128, n) as u64 / (4 * n as u64);
    let b_min = iroot_u128(x as u128, n - 1) as u64 / (4 * n as u64 * n as u64);
    if a_min < 2 || b_min < 2 {
        return Err(Error::UnsupportedRange(format!(
            "X = {x} gives A = {a_min}, B = {b_min}; need both >= 2 (X too small for n = {n})"
        )));
    }
    let census_box = CensusBox::new(n, a_min, b_min)?;
    let core = match census_core(&census_box, cfg)? {
        CoreResult::Complete(core) => core,
        CoreResult::Partial { chunks_done, chunks_total } => {
            return Ok(FieldOutcome::Partial { chunks_done, chunks_total });
        }
    };
    let x_big = BigInt::from(x);
    let mut keys: Vec<&DiscKey> = core
        .entries
        .iter()
        .filter(|e| e.member && e.osada && e.key.to_bigint().abs() <= x_big)
        .map(|e| &e.key)
        .collect();
    keys.sort();
    keys.dedup();
    let n_fields = keys.len() as u64;
    Ok(FieldOutcome::Complete(Box::new(FieldCount {
        n,
        x,
        a_min,
        b_min,
        n_fields,
        report: core.report,
    })))
}
