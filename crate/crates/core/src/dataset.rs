//! Labeled moduli points keyed by their absolute invariants.
//!
//! Labels that cannot be certified from the point alone (fineness, `L3`
//! and `L5` membership) are tri-state: `Some(true)`, `Some(false)` or
//! `None` for unknown. They are only set from the way a point was
//! constructed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerate::HeightBox;
use crate::igusa::{absolute_t, same_moduli, AbsoluteTriple, ModuliPoint};
use crate::loci::{in_l2, l2_random_point, l3_random_point, l5_generate_points, L5Config};
use crate::rng::{self, RationalRange};
use crate::wproj::{self, serde_biguint_str, WeightSystem, WeightedPoint};
use crate::{Error, Rational, Result};

pub const SCHEMA: &str = "g2ml/1";

/// Identifier `[order, id]` of the cyclic group of order 10 in the small
/// groups library.
pub const C10_ID: [u32; 2] = [10, 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "enum")]
    Enum,
    #[serde(rename = "l2-param")]
    L2Param,
    #[serde(rename = "l3-param")]
    L3Param,
    #[serde(rename = "l5-param")]
    L5Param,
    #[serde(rename = "random")]
    Random,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Enum => "enum",
            Provenance::L2Param => "l2-param",
            Provenance::L3Param => "l3-param",
            Provenance::L5Param => "l5-param",
            Provenance::Random => "random",
        }
    }

    /// Whether the point comes with a curve defined over the rationals.
    pub fn constructs_curve(self) -> bool {
        matches!(self, Provenance::L2Param | Provenance::L3Param | Provenance::L5Param)
    }
}

impl core::str::FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "enum" => Provenance::Enum,
            "l2-param" => Provenance::L2Param,
            "l3-param" => Provenance::L3Param,
            "l5-param" => Provenance::L5Param,
            "random" => Provenance::Random,
            _ => return Err(Error::InvalidArgument(format!("unknown provenance {s:?}"))),
        })
    }
}

mod serde_tuple_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &[BigInt; 4], s: S) -> core::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = x.iter().map(ToString::to_string).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> core::result::Result<[BigInt; 4], D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.len() != 4 {
            return Err(serde::de::Error::custom("expected 4 coordinates"));
        }
        let mut out: [BigInt; 4] = Default::default();
        for (o, s) in out.iter_mut().zip(&v) {
            *o = s.parse().map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetRecord {
    pub key: AbsoluteTriple,
    pub p: ModuliPoint,
    #[serde(with = "serde_tuple_str")]
    pub p_abs: [BigInt; 4],
    /// Weighted height, 9 significant digits.
    pub wh: f64,
    /// Absolute weighted height, 9 significant digits.
    pub awh: f64,
    #[serde(with = "serde_biguint_str")]
    pub gcd: BigUint,
    pub fine: Option<bool>,
    pub aut: Option<[u32; 2]>,
    #[serde(rename = "inL2")]
    pub in_l2: bool,
    #[serde(rename = "inL3")]
    pub in_l3: Option<bool>,
    #[serde(rename = "inL5")]
    pub in_l5: Option<bool>,
    #[serde(rename = "inL7")]
    pub in_l7: Option<bool>,
    pub provenance: Provenance,
}

/// Rounds to 9 significant digits through the decimal representation.
pub fn round_sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

pub fn is_c10_point(p: &ModuliPoint) -> bool {
    p.j2().is_zero() && p.j4().is_zero() && p.j6().is_zero()
}

pub fn build_record(p: &ModuliPoint, provenance: Provenance) -> DatasetRecord {
    let w = p.to_weighted();
    let p_abs = p.abs_normalized();
    let abs_point = WeightedPoint::new(p_abs.to_vec(), WeightSystem::igusa()).expect("J10 != 0");
    let c10 = is_c10_point(p);
    let constructed = provenance.constructs_curve();
    DatasetRecord {
        key: absolute_t(p),
        p: p.clone(),
        p_abs,
        wh: round_sig9(wproj::raw_height(&w).value),
        awh: round_sig9(wproj::raw_height(&abs_point).value),
        gcd: w.content(),
        fine: if c10 || constructed { Some(true) } else { None },
        aut: if c10 { Some(C10_ID) } else { None },
        in_l2: in_l2(p),
        in_l3: (provenance == Provenance::L3Param).then_some(true),
        in_l5: (provenance == Provenance::L5Param).then_some(true),
        in_l7: None,
        provenance,
    }
}

fn merge_tri(key: &AbsoluteTriple, field: &str, a: Option<bool>, b: Option<bool>) -> Result<Option<bool>> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(Error::LabelConflict { key: key.to_string(), field: field.into() }),
        (Some(x), _) | (None, Some(x)) => Ok(Some(x)),
        (None, None) => Ok(None),
    }
}

/// Merges the labels of two records of the same class; `a` keeps its
/// representative and provenance.
pub fn merge_records(a: &DatasetRecord, b: &DatasetRecord) -> Result<DatasetRecord> {
    let key = &a.key;
    if a.key != b.key {
        return Err(Error::InvalidArgument(format!("merging records with keys {} and {}", a.key, b.key)));
    }
    if a.in_l2 != b.in_l2 {
        return Err(Error::LabelConflict { key: key.to_string(), field: "inL2".into() });
    }
    let aut = match (a.aut, b.aut) {
        (Some(x), Some(y)) if x != y => return Err(Error::LabelConflict { key: key.to_string(), field: "aut".into() }),
        (x, y) => x.or(y),
    };
    Ok(DatasetRecord {
        fine: merge_tri(key, "fine", a.fine, b.fine)?,
        aut,
        in_l3: merge_tri(key, "inL3", a.in_l3, b.in_l3)?,
        in_l5: merge_tri(key, "inL5", a.in_l5, b.in_l5)?,
        in_l7: merge_tri(key, "inL7", a.in_l7, b.in_l7)?,
        ..a.clone()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metadata {
    pub schema: String,
    pub seed: Option<u64>,
    /// Generation settings as `key=value` pairs.
    pub config: BTreeMap<String, String>,
}

impl Metadata {
    pub fn new(seed: Option<u64>) -> Self {
        Metadata { schema: SCHEMA.into(), seed, config: BTreeMap::new() }
    }
}

/// Records keyed by absolute invariants, iterated in key order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub meta: Metadata,
    records: BTreeMap<AbsoluteTriple, DatasetRecord>,
}

impl Default for Dataset {
    fn default() -> Self {
        Dataset::new(Metadata::new(None))
    }
}

impl Dataset {
    pub fn new(meta: Metadata) -> Self {
        Dataset { meta, records: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, key: &AbsoluteTriple) -> Option<&DatasetRecord> {
        self.records.get(key)
    }

    pub fn contains(&self, key: &AbsoluteTriple) -> bool {
        self.records.contains_key(key)
    }

    pub fn records(&self) -> impl Iterator<Item = &DatasetRecord> {
        self.records.values()
    }

    /// Adds a record, merging labels when the class is already present.
    /// Returns whether the class was new.
    pub fn insert(&mut self, rec: DatasetRecord) -> Result<bool> {
        match self.records.get(&rec.key) {
            Some(old) => {
                debug_assert!(same_moduli(&old.p, &rec.p));
                let merged = merge_records(old, &rec)?;
                self.records.insert(rec.key.clone(), merged);
                Ok(false)
            }
            None => {
                self.records.insert(rec.key.clone(), rec);
                Ok(true)
            }
        }
    }

    /// Union by key; `self`'s records win on representative and provenance.
    pub fn merge(&self, other: &Dataset) -> Result<Dataset> {
        if self.meta.schema != other.meta.schema {
            return Err(Error::SchemaMismatch(format!("{} vs {}", self.meta.schema, other.meta.schema)));
        }
        let mut out = self.clone();
        for rec in other.records() {
            out.insert(rec.clone())?;
        }
        Ok(out)
    }

    /// Recomputes every derivable field and reports the records that
    /// disagree with their stored labels.
    pub fn audit(&self) -> AuditReport {
        let mut report = AuditReport { records: self.len(), ..Default::default() };
        for rec in self.records() {
            let fresh = build_record(&rec.p, rec.provenance);
            let mut bad = Vec::new();
            if fresh.key != rec.key {
                bad.push("key");
            }
            if fresh.in_l2 != rec.in_l2 {
                bad.push("inL2");
            }
            if fresh.p_abs != rec.p_abs {
                bad.push("pAbs");
            }
            if fresh.gcd != rec.gcd {
                bad.push("gcd");
            }
            if fresh.wh != rec.wh || fresh.awh != rec.awh {
                bad.push("height");
            }
            if rec.provenance == Provenance::L3Param && rec.in_l3 != Some(true) {
                bad.push("inL3");
            }
            if rec.provenance == Provenance::L5Param && rec.in_l5 != Some(true) {
                bad.push("inL5");
            }
            if rec.provenance.constructs_curve() && rec.fine != Some(true) {
                bad.push("fine");
            }
            if rec.in_l2 {
                report.in_l2 += 1;
            }
            for field in bad {
                report.mismatches.push((rec.key.to_string(), field.into()));
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AuditReport {
    pub records: usize,
    pub in_l2: usize,
    /// `(key, field)` pairs that failed recomputation.
    pub mismatches: Vec<(String, String)>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Composition of a generated dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    /// Distinct classes wanted from each source.
    pub l2: usize,
    pub l3: usize,
    pub l5: usize,
    pub other: usize,
    /// Range of the `(a, b)` parameters of `y^2 = x^6 + a x^4 + b x^2 + 1`.
    pub l2_range: RationalRange,
    /// Range of the `(u, v)` parameters of the `L3` family.
    pub l3_range: RationalRange,
    /// Other points are drawn uniformly from the box of this height.
    #[serde(with = "crate::wproj::serde_rational_str")]
    pub other_height: Rational,
    pub l5_config: L5Config,
    pub max_retries: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            l2: 10_000,
            l3: 10_000,
            l5: 0,
            other: 10_000,
            l2_range: RationalRange::new(1_000_000, 1),
            l3_range: RationalRange::new(1_000_000, 1),
            other_height: Rational::from_integer(3.into()),
            l5_config: L5Config::default(),
            max_retries: 100,
        }
    }
}

impl GenConfig {
    pub fn quota(&self, kind: Provenance) -> usize {
        match kind {
            Provenance::L2Param => self.l2,
            Provenance::L3Param => self.l3,
            Provenance::L5Param => self.l5,
            Provenance::Random => self.other,
            Provenance::Enum => 0,
        }
    }
}

fn stream_base(kind: Provenance) -> u64 {
    let tag = match kind {
        Provenance::Enum => 0,
        Provenance::L2Param => 1,
        Provenance::L3Param => 2,
        Provenance::L5Param => 3,
        Provenance::Random => 4,
    };
    tag << 56
}

/// Uniform normalized point of the height box with `J10 != 0` and
/// `J30 != 0`.
pub fn random_box_point<R: rand::Rng>(rng: &mut R, hb: &HeightBox, max_retries: usize) -> Result<ModuliPoint> {
    for _ in 0..=max_retries {
        let j: [i64; 4] = core::array::from_fn(|i| rng.gen_range(hb.range(i)));
        if j[3] == 0 {
            continue;
        }
        let p = ModuliPoint::from_i64(j)?;
        if !in_l2(&p) {
            return Ok(p);
        }
    }
    Err(Error::RetriesExhausted(max_retries + 1))
}

/// Draw number `index` from the given source; every draw has its own
/// stream, so draws can be evaluated in any order.
pub fn draw_record(kind: Provenance, cfg: &GenConfig, seed: u64, index: u64) -> Result<DatasetRecord> {
    let mut r = rng::stream(seed, stream_base(kind) + index);
    let p = match kind {
        Provenance::L2Param => l2_random_point(&mut r, &cfg.l2_range, cfg.max_retries)?.2,
        Provenance::L3Param => l3_random_point(&mut r, &cfg.l3_range, cfg.max_retries)?.1,
        Provenance::Random => random_box_point(&mut r, &HeightBox::new(&cfg.other_height, false)?, cfg.max_retries)?,
        Provenance::L5Param | Provenance::Enum => {
            return Err(Error::InvalidArgument(format!("no per-index draws for {}", kind.as_str())))
        }
    };
    Ok(build_record(&p, kind))
}

/// Inserts records in order until `quota` new classes were added; returns
/// how many records were consumed.
pub fn fill_quota(
    d: &mut Dataset,
    quota: usize,
    added: &mut usize,
    records: impl IntoIterator<Item = DatasetRecord>,
) -> Result<usize> {
    let mut used = 0;
    for rec in records {
        if *added >= quota {
            break;
        }
        used += 1;
        if d.insert(rec)? {
            *added += 1;
        }
    }
    Ok(used)
}

/// Upper bound on draws per source before giving up on finding new classes.
pub fn draw_limit(quota: usize) -> u64 {
    4 * quota as u64 + 1000
}

/// Sequential generation; the companion crate runs the same draws in
/// parallel and gets the same dataset.
pub fn generate(cfg: &GenConfig, seed: u64) -> Result<Dataset> {
    let mut d = Dataset::new(Metadata::new(Some(seed)));
    for kind in [Provenance::L3Param, Provenance::L2Param, Provenance::Random] {
        let quota = cfg.quota(kind);
        let mut added = 0;
        let mut index = 0u64;
        while added < quota {
            if index >= draw_limit(quota) {
                return Err(Error::RetriesExhausted(index as usize));
            }
            let rec = draw_record(kind, cfg, seed, index)?;
            index += 1;
            fill_quota(&mut d, quota, &mut added, [rec])?;
        }
    }
    add_l5(&mut d, cfg, seed)?;
    Ok(d)
}

/// `L5` points follow the slice algorithm and are inserted in its order.
pub fn add_l5(d: &mut Dataset, cfg: &GenConfig, seed: u64) -> Result<usize> {
    if cfg.l5 == 0 {
        return Ok(0);
    }
    let samples = l5_generate_points(cfg.l5, seed, &cfg.l5_config)?;
    let mut added = 0;
    for s in samples {
        if d.insert(build_record(&s.point, Provenance::L5Param))? {
            added += 1;
        }
    }
    Ok(added)
}

/// Class labels used for learning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassScheme {
    /// `L3`, `L2`, other.
    Three,
    /// `L3`, `L2`, `L5`, other.
    Four,
}

impl ClassScheme {
    pub fn names(self) -> &'static [&'static str] {
        match self {
            ClassScheme::Three => &["L3", "L2", "other"],
            ClassScheme::Four => &["L3", "L2", "L5", "other"],
        }
    }

    pub fn len(self) -> usize {
        self.names().len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// Class index of a record, or `None` when its labels do not decide it.
    ///
    /// Randomly drawn points count as off every locus they are not known to
    /// lie on; other provenances need an explicit negative label.
    pub fn class_of(self, rec: &DatasetRecord) -> Option<usize> {
        if rec.in_l3 == Some(true) {
            return Some(0);
        }
        if rec.in_l2 {
            return Some(1);
        }
        let four = self == ClassScheme::Four;
        if four && rec.in_l5 == Some(true) {
            return Some(2);
        }
        let assumed = rec.provenance == Provenance::Random;
        let l3_open = rec.in_l3.is_none() && !assumed;
        let l5_open = four && rec.in_l5.is_none() && !assumed;
        if l3_open || l5_open {
            None
        } else {
            Some(self.len() - 1)
        }
    }
}

impl core::str::FromStr for ClassScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "3" | "three" => Ok(ClassScheme::Three),
            "4" | "four" => Ok(ClassScheme::Four),
            _ => Err(Error::InvalidArgument(format!("unknown class scheme {s:?}"))),
        }
    }
}

/// `(J2, J4, J6, J10)` divided exactly by the largest absolute coordinate,
/// then rounded to floats. Entries lie in `[-1, 1]` and proportional
/// tuples give the same row.
pub fn feature_row(p: &ModuliPoint) -> [f64; 4] {
    let m = p.j().iter().map(|x| x.magnitude()).max().cloned().unwrap_or_default();
    let m = BigInt::from(m);
    core::array::from_fn(|i| Rational::new(p.j()[i].clone(), m.clone()).to_f64().unwrap_or(0.0))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Features {
    pub rows: Vec<[f64; 4]>,
    pub labels: Vec<usize>,
    /// Records left out because their class was undecided.
    pub excluded: usize,
}

pub fn features(d: &Dataset, scheme: ClassScheme) -> Features {
    let mut out = Features::default();
    for rec in d.records() {
        match scheme.class_of(rec) {
            Some(c) => {
                out.rows.push(feature_row(&rec.p));
                out.labels.push(c);
            }
            None => out.excluded += 1,
        }
    }
    out
}
