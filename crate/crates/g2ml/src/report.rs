//! Re-derivation of the reference tables (counts, height-one points, `L2`
//! and `L3` points of small height) with a verdict per table.

use std::collections::BTreeSet;
use std::fmt;

use g2ml_core::enumerate::{count_sextic_f, Enumeration, DEFAULT_BUDGET};
use g2ml_core::igusa::{same_moduli, ModuliPoint};
use g2ml_core::known::{HEIGHT_ONE, L2_POINTS, L3_POINTS, L3_STATED_COUNTS, SEXTIC_COUNTS};
use g2ml_core::wproj::{height_leq, is_normalized};
use g2ml_core::Rational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::par::{enumerate_par, scan_l2_par};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCheck {
    pub table: u8,
    pub verdict: Verdict,
    pub details: Vec<String>,
}

impl fmt::Display for TableCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Table {}: {}", self.table, self.verdict)?;
        for d in &self.details {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn points(tuples: &[[i64; 4]]) -> Vec<ModuliPoint> {
    tuples.iter().map(|j| ModuliPoint::from_i64(*j).expect("reference tuples have J10 != 0")).collect()
}

pub fn table1() -> TableCheck {
    let mut details = Vec::new();
    let mut ok = true;
    for (i, want) in SEXTIC_COUNTS.iter().enumerate() {
        let got = count_sextic_f(i as u64 + 1);
        if got.to_u64() != Some(*want) {
            ok = false;
            details.push(format!("h = {}: computed {got}, expected {want}", i + 1));
        }
    }
    details.push(format!("{} of {} counts match", SEXTIC_COUNTS.len() - details.len(), SEXTIC_COUNTS.len()));
    TableCheck { table: 1, verdict: verdict(ok), details }
}

/// Classes of `e` that contain exactly one of `reference`, and reference
/// tuples that fall in exactly one class.
pub fn match_classes(e: &Enumeration, reference: &[ModuliPoint]) -> (usize, usize) {
    let hits = |c: &ModuliPoint| reference.iter().filter(|r| same_moduli(c, r)).count();
    let classes = e.classes.iter().filter(|c| hits(c) == 1).count();
    let refs = reference.iter().filter(|r| e.classes.iter().filter(|c| same_moduli(c, r)).count() == 1).count();
    (classes, refs)
}

pub fn table2() -> Result<TableCheck> {
    let e = enumerate_par(&q(1), false, DEFAULT_BUDGET)?;
    let reference = points(&HEIGHT_ONE);
    let (classes, refs) = match_classes(&e, &reference);
    let ok = e.classes.len() == HEIGHT_ONE.len() && classes == e.classes.len() && refs == reference.len();
    let details = vec![
        format!("{} normalized tuples, {} classes (expected {})", e.tuples.len(), e.classes.len(), HEIGHT_ONE.len()),
        format!(
            "{classes} classes hold exactly one reference tuple; {refs} of {} reference tuples matched once",
            reference.len()
        ),
    ];
    Ok(TableCheck { table: 2, verdict: verdict(ok), details })
}

fn tuple_set(ps: &[ModuliPoint]) -> BTreeSet<ModuliPoint> {
    ps.iter().cloned().collect()
}

pub fn table3() -> Result<TableCheck> {
    let reference = tuple_set(&points(&L2_POINTS));
    let e3 = scan_l2_par(&q(3), false, DEFAULT_BUDGET)?;
    let e2 = scan_l2_par(&q(2), false, DEFAULT_BUDGET)?;
    let got3 = tuple_set(&e3.tuples);
    let got2 = tuple_set(&e2.tuples);
    let details = vec![
        format!("height <= 3: {} tuples, {} classes (expected {} tuples)", got3.len(), e3.classes.len(), reference.len()),
        format!("reference tuples found at height <= 3: {}", reference.intersection(&got3).count()),
        format!(
            "height <= 2: {} tuples, {} classes, set equal to reference: {}",
            got2.len(),
            e2.classes.len(),
            got2 == reference
        ),
    ];
    Ok(TableCheck { table: 3, verdict: verdict(got3 == reference), details })
}

#[derive(Debug, Clone, Serialize)]
pub struct L3Audit {
    pub listed: usize,
    pub unique: usize,
    pub stated: [usize; 2],
    pub height_ok: usize,
    pub normalized: usize,
    /// Zero-based row pairs `(earlier, later)` listing the same tuple.
    pub duplicates: Vec<(usize, usize)>,
}

pub fn audit_l3_table() -> Result<L3Audit> {
    let three = q(3);
    let mut height_ok = 0;
    let mut normalized = 0;
    let mut duplicates = Vec::new();
    for (i, j) in L3_POINTS.iter().enumerate() {
        let w = g2ml_core::wproj::WeightedPoint::from_i64(j, g2ml_core::wproj::WeightSystem::igusa())?;
        height_ok += usize::from(height_leq(&w, &three, false)?);
        normalized += usize::from(is_normalized(&w));
        if let Some(first) = L3_POINTS[..i].iter().position(|k| k == j) {
            duplicates.push((first, i));
        }
    }
    let unique = L3_POINTS.iter().collect::<BTreeSet<_>>().len();
    Ok(L3Audit { listed: L3_POINTS.len(), unique, stated: L3_STATED_COUNTS, height_ok, normalized, duplicates })
}

pub fn table4() -> Result<TableCheck> {
    let a = audit_l3_table()?;
    let ok = a.height_ok == a.listed && a.normalized == a.listed;
    let dups: Vec<String> = a.duplicates.iter().map(|(x, y)| format!("#{} = #{}", x + 1, y + 1)).collect();
    let details = vec![
        format!("{} listed tuples: {} of height <= 3, {} normalized", a.listed, a.height_ok, a.normalized),
        format!("{} unique tuples; stated counts {} and {}", a.unique, a.stated[0], a.stated[1]),
        format!("duplicate rows: {}", dups.join(", ")),
        "note: the listed, unique and stated counts disagree; no defining equation is available, so this is an audit only".into(),
    ];
    Ok(TableCheck { table: 4, verdict: verdict(ok), details })
}

pub fn all_tables() -> Result<Vec<TableCheck>> {
    Ok(vec![table1(), table2()?, table3()?, table4()?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables_pass() {
        assert_eq!(table1().verdict, Verdict::Pass);
        assert_eq!(table2().unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn l3_audit_counts() {
        let a = audit_l3_table().unwrap();
        assert_eq!((a.listed, a.height_ok, a.normalized), (44, 44, 44));
        assert_eq!(a.unique + a.duplicates.len(), a.listed);
        assert!(a.duplicates.contains(&(2, 39)));
        assert_eq!(table4().unwrap().verdict, Verdict::Pass);
    }
}
