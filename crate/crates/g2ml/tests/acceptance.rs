//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p g2ml --test acceptance`. The process fails when a
//! criterion fails that is not listed in `KNOWN_FAILURES`; a listed one
//! still prints FAIL together with the measured numbers.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use g2ml::io::{dataset_from_reader, dataset_to_string};
use g2ml::par::{enumerate_par, forest_par, forest_predict_par, generate_par, gmm_par, kmeans_par, knn_par, scan_l2_par};
use g2ml::report::{audit_l3_table, match_classes};
use g2ml_core::dataset::{build_record, features, ClassScheme, Dataset, GenConfig, Provenance};
use g2ml_core::enumerate::{count_bound_general, count_even_weights, count_sextic_f, shell_count_g, DEFAULT_BUDGET};
use g2ml_core::igusa::{igusa_invariants, same_moduli, ModuliPoint};
use g2ml_core::known::{HEIGHT_ONE, L2_POINTS, NN_CONFUSION, RF_CONFUSION};
use g2ml_core::loci::{
    in_l2, j30, l2_curve_point, l3_curve, l3_point, l5_generate_points, l5_sample_at, l5_slice, l5_surface, uvw_from_params,
    uvw_residual, L3Params, L5Config,
};
use g2ml_core::ml::{
    adjusted_rand_index, evaluate, train_test_split_indices, FeatureMatrix, ForestConfig, GmmConfig, KMeansConfig, Metric, Row,
};
use g2ml_core::rng::{stream, RationalRange};
use g2ml_core::wproj::{abs_normalize, height_leq, normalize, scale_int, wgcd, WeightSystem, WeightedPoint};
use g2ml_core::Rational;
use num_traits::{One, Zero};
use rand::Rng;

const SEED: u64 = 20_240_611;
const KNOWN_FAILURES: &[u32] = &[6];

const KNN_FLOOR: f64 = 0.99;
const RF_FLOOR: f64 = 0.99;
const FIXTURE_TOL: f64 = 0.005;
const ACCURACY_TOL: f64 = 1e-6;

const TABLE1: [u64; 10] = [
    40,
    24_862,
    1_781_202,
    39_251_668,
    440_104_780,
    3_195_496_050,
    17_146_927_462,
    73_657_853_512,
    266_816_523_888,
    844_626_323_110,
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn pt(j: [i64; 4]) -> ModuliPoint {
    ModuliPoint::from_i64(j).unwrap()
}

fn within(limit: Duration, took: Duration) -> bool {
    took <= limit
}

fn c1() -> Outcome {
    let t = Instant::now();
    let bad: Vec<u64> = (1..=10u64).filter(|&h| count_sextic_f(h) != TABLE1[h as usize - 1].into()).collect();
    let took = t.elapsed();
    outcome(
        bad.is_empty() && within(Duration::from_secs(1), took),
        format!("10 values, mismatches at h = {bad:?}, {took:.2?} (limit 1 s)"),
    )
}

fn c2() -> Outcome {
    let t = Instant::now();
    let bad: Vec<u64> = (1..=100u64).filter(|&h| shell_count_g(h) != count_sextic_f(h) - count_sextic_f(h - 1)).collect();
    let g1 = shell_count_g(1);
    let took = t.elapsed();
    outcome(
        bad.is_empty() && g1 == 40.into() && within(Duration::from_secs(1), took),
        format!("h = 1..100, mismatches {bad:?}, G(1) = {g1}, {took:.2?} (limit 1 s)"),
    )
}

fn c3() -> Outcome {
    let even = WeightSystem::new(vec![2, 4, 6, 10]).unwrap();
    let mut bad = Vec::new();
    for h in 1..=10u64 {
        let target = count_sextic_f(h * h);
        let general = num_bigint::BigInt::from(count_bound_general(&even, h));
        if count_even_weights(h) != target || general != target {
            bad.push(h);
        }
    }
    outcome(bad.is_empty(), format!("h = 1..10 against F(h^2) and the weight-(2,4,6,10) bound, mismatches {bad:?}"))
}

fn c4() -> Outcome {
    let t = Instant::now();
    let e = enumerate_par(&q(1, 1), false, DEFAULT_BUDGET).unwrap();
    let took = t.elapsed();
    let reference: Vec<ModuliPoint> = HEIGHT_ONE.iter().map(|j| pt(*j)).collect();
    let (classes, refs) = match_classes(&e, &reference);
    let pass = e.classes.len() == 27 && classes == 27 && refs == 27 && within(Duration::from_secs(10), took);
    outcome(
        pass,
        format!(
            "{} tuples, {} classes; {classes} classes hold exactly one reference tuple, {refs}/27 matched once; {took:.2?} (limit 10 s)",
            e.tuples.len(),
            e.classes.len()
        ),
    )
}

fn c5() -> Outcome {
    let t = Instant::now();
    let e = scan_l2_par(&q(3, 2), true, DEFAULT_BUDGET).unwrap();
    let took = t.elapsed();
    let full = enumerate_par(&q(3, 2), true, DEFAULT_BUDGET).unwrap();
    let filtered = full.tuples.iter().filter(|p| in_l2(p)).count();
    outcome(
        e.tuples.is_empty() && filtered == 0 && within(Duration::from_secs(60), took),
        format!(
            "scan: {} tuples in {took:.2?} (limit 60 s); box filter: {filtered} of {} tuples with J30 = 0",
            e.tuples.len(),
            full.tuples.len()
        ),
    )
}

fn c6() -> Outcome {
    let reference: BTreeSet<ModuliPoint> = L2_POINTS.iter().map(|j| pt(*j)).collect();
    let t = Instant::now();
    let e3 = scan_l2_par(&q(3, 1), false, DEFAULT_BUDGET).unwrap();
    let took = t.elapsed();
    let e2 = scan_l2_par(&q(2, 1), false, DEFAULT_BUDGET).unwrap();
    let got3: BTreeSet<ModuliPoint> = e3.tuples.iter().cloned().collect();
    let got2: BTreeSet<ModuliPoint> = e2.tuples.iter().cloned().collect();
    let all_zero = e3.tuples.iter().all(|p| j30(p).is_zero());
    outcome(
        got3 == reference && within(Duration::from_secs(2 * 3600), took),
        format!(
            "h <= 3: {} tuples / {} classes (expected 34 / 17), all J30 = 0: {all_zero}, {} of 34 reference tuples present, {took:.2?}; \
             h <= 2: {} tuples / {} classes, equal to the reference set: {}",
            got3.len(),
            e3.classes.len(),
            reference.intersection(&got3).count(),
            got2.len(),
            e2.classes.len(),
            got2 == reference
        ),
    )
}

fn c7() -> Outcome {
    let a = audit_l3_table().unwrap();
    let dups: Vec<String> = a.duplicates.iter().map(|(x, y)| format!("#{}=#{}", x + 1, y + 1)).collect();
    outcome(
        a.height_ok == a.listed && a.normalized == a.listed,
        format!(
            "{} listed, {} of height <= 3, {} normalized, {} unique; stated {} and {}; duplicates {}",
            a.listed,
            a.height_ok,
            a.normalized,
            a.unique,
            a.stated[0],
            a.stated[1],
            dups.join(" ")
        ),
    )
}

fn c8() -> Outcome {
    let range = RationalRange::new(50, 20);
    let mut r = stream(SEED, 8);
    let (mut ok, mut drawn) = (0, 0);
    while drawn < 100 {
        let Ok(p) = L3Params::new(range.sample(&mut r), range.sample(&mut r)) else { continue };
        let Ok(f) = l3_curve(&p) else { continue };
        drawn += 1;
        if same_moduli(&l3_point(&p).unwrap(), &igusa_invariants(&f).unwrap()) {
            ok += 1;
        }
    }
    outcome(ok == 100, format!("{ok}/100 parameter pairs agree"))
}

fn c9() -> Outcome {
    let range = RationalRange::new(1000, 100);
    let mut r = stream(SEED, 9);
    let (mut on, mut drawn) = (0, 0);
    while drawn < 1000 {
        let Ok(p) = l2_curve_point(&range.sample(&mut r), &range.sample(&mut r)) else { continue };
        drawn += 1;
        on += usize::from(j30(&p).is_zero());
    }
    let mut off_fail = Vec::new();
    let mut generic = 0;
    while generic < 1000 {
        let j: [i64; 4] = std::array::from_fn(|_| r.gen_range(-1_000_000..=1_000_000));
        if j[3] == 0 {
            continue;
        }
        generic += 1;
        let p = pt(j);
        if j30(&p).is_zero() {
            off_fail.push(p.to_string());
        }
    }
    outcome(
        on == 1000 && off_fail.is_empty(),
        format!("J30 = 0 on {on}/1000 family points; J30 = 0 on random points: {off_fail:?}"),
    )
}

fn c10() -> Outcome {
    let symbolic: Vec<bool> = [q(2, 1), q(1, 2)].iter().map(|s| l5_slice(s).unwrap().surface_residual().is_zero()).collect();
    let mut r = stream(SEED, 10);
    let (s_range, t_range) = (RationalRange::new(20, 10), RationalRange::new(50, 20));
    let (mut on_surface, mut uvw_zero, mut uvw_undefined, mut drawn) = (0, 0, 0, 0);
    while drawn < 100 {
        let Ok(slice) = l5_slice(&s_range.sample(&mut r)) else { continue };
        let Ok(sample) = l5_sample_at(&slice, &t_range.sample(&mut r)) else { continue };
        drawn += 1;
        let p = &sample.params;
        on_surface += usize::from(l5_surface(&p.a, &p.b, &p.z).is_zero());
        match uvw_from_params(p) {
            Ok(t) => uvw_zero += usize::from(uvw_residual(&t).is_zero()),
            Err(_) => uvw_undefined += 1,
        }
    }
    let cfg = L5Config::default();
    let a = l5_generate_points(50, SEED, &cfg).unwrap();
    let b = l5_generate_points(50, SEED, &cfg).unwrap();
    let valid = a
        .iter()
        .filter(|s| {
            let rec = build_record(&s.point, Provenance::L5Param);
            l5_surface(&s.params.a, &s.params.b, &s.params.z).is_zero() && rec.in_l5 == Some(true) && !s.point.j10().is_zero()
        })
        .count();
    let pass = symbolic == [true, true] && on_surface == 100 && uvw_zero + uvw_undefined == 100 && valid == 50 && a == b;
    outcome(
        pass,
        format!(
            "symbolic slices s = 2, 1/2: {symbolic:?}; f = 0 on {on_surface}/100 random samples; \
             uvw residual zero on {uvw_zero}/100 ({uvw_undefined} undefined); n = 50 run: {} samples, {valid} valid, deterministic: {}",
            a.len(),
            a == b
        ),
    )
}

struct Desk {
    data: Dataset,
    x: FeatureMatrix,
    gen_time: Duration,
}

fn desk_dataset() -> Desk {
    let t = Instant::now();
    let data = generate_par(&GenConfig::default(), SEED).unwrap();
    let gen_time = t.elapsed();
    let f = features(&data, ClassScheme::Three);
    assert_eq!(f.excluded, 0);
    let x = FeatureMatrix::new(f.rows, Some(f.labels)).unwrap().normalized().unwrap();
    Desk { data, x, gen_time }
}

fn c11(d: &Desk) -> Outcome {
    let t = Instant::now();
    let labels = d.x.labels().unwrap();
    let per_class: Vec<usize> = (0..3).map(|c| labels.iter().filter(|&&l| l == c).count()).collect();
    let (tr, te) = train_test_split_indices(labels, 0.3, SEED).unwrap();
    let (train, test) = (d.x.select(&tr), d.x.select(&te));
    let truth = test.labels().unwrap();
    let knn = knn_par(&train, &test.rows, 5, Metric::Manhattan).unwrap();
    let (_, knn_rep) = evaluate(&knn, truth).unwrap();
    let forest = forest_par(&train, &ForestConfig { n_trees: 200, ..Default::default() }, SEED).unwrap();
    let (_, rf_rep) = evaluate(&forest_predict_par(&forest, &test.rows), truth).unwrap();
    let (_, rf_train) = evaluate(&forest_predict_par(&forest, &train.rows), train.labels().unwrap()).unwrap();
    let took = t.elapsed() + d.gen_time;
    let pass = knn_rep.accuracy >= KNN_FLOOR
        && knn_rep.macro_avg.f1 >= KNN_FLOOR
        && rf_rep.accuracy >= RF_FLOOR
        && within(Duration::from_secs(15 * 60), took);
    outcome(
        pass,
        format!(
            "classes (L3, L2, other) = {per_class:?}, test rows {}; KNN acc {:.4} macro-F1 {:.4} (floor {KNN_FLOOR}); \
             RF acc {:.4} (floor {RF_FLOOR}), RF train acc {:.4}; {took:.1?} incl. generation {:.1?} (limit 15 min)",
            test.len(),
            knn_rep.accuracy,
            knn_rep.macro_avg.f1,
            rf_rep.accuracy,
            rf_train.accuracy,
            d.gen_time
        ),
    )
}

fn blobs() -> (Vec<Row>, Vec<usize>) {
    let mut r = stream(SEED, 12);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for c in 0..4 {
        let mut center = [0.0; 4];
        center[c] = 10.0;
        for _ in 0..50 {
            rows.push(center.map(|x| x + r.gen_range(-0.5..0.5)));
            labels.push(c);
        }
    }
    (rows, labels)
}

fn c12(d: &Desk) -> Outcome {
    let labels = d.x.labels().unwrap();
    let km = kmeans_par(&d.x.rows, &KMeansConfig { k: 4, ..Default::default() }, SEED).unwrap();
    let gmm = gmm_par(&d.x.rows, &GmmConfig { k: 4, ..Default::default() }, SEED).unwrap();
    let ari_km = adjusted_rand_index(&km.predict(&d.x.rows), labels).unwrap();
    let ari_gmm = adjusted_rand_index(&gmm.predict(&d.x.rows), labels).unwrap();
    let (rows, truth) = blobs();
    let blob_km =
        adjusted_rand_index(&kmeans_par(&rows, &KMeansConfig::default(), SEED).unwrap().predict(&rows), &truth).unwrap();
    let blob_gmm = adjusted_rand_index(&gmm_par(&rows, &GmmConfig::default(), SEED).unwrap().predict(&rows), &truth).unwrap();
    outcome(
        ari_gmm >= ari_km && blob_km == 1.0 && blob_gmm == 1.0,
        format!(
            "dataset ({} rows): ARI GMM {ari_gmm:.4} vs KMeans {ari_km:.4}; 4 blobs: KMeans {blob_km}, GMM {blob_gmm}",
            d.data.len()
        ),
    )
}

fn expand(m: &[[u64; 3]; 3]) -> (Vec<usize>, Vec<usize>) {
    let mut pred = Vec::new();
    let mut truth = Vec::new();
    for (t, row) in m.iter().enumerate() {
        for (p, &n) in row.iter().enumerate() {
            for _ in 0..n {
                pred.push(p);
                truth.push(t);
            }
        }
    }
    (pred, truth)
}

fn c13() -> Outcome {
    let (p, t) = expand(&NN_CONFUSION);
    let (_, nn) = evaluate(&p, &t).unwrap();
    let c = nn.per_class[0];
    let (p, t) = expand(&RF_CONFUSION);
    let (cm, rf) = evaluate(&p, &t).unwrap();
    let want = 38_879.0 / 38_883.0;
    let pass = (c.precision - 0.87).abs() <= FIXTURE_TOL
        && (c.recall - 1.0).abs() <= FIXTURE_TOL
        && (c.f1 - 0.93).abs() <= FIXTURE_TOL
        && (rf.accuracy - want).abs() <= ACCURACY_TOL
        && cm.total() == 38_883;
    outcome(
        pass,
        format!(
            "class 1: P {:.4} R {:.4} F1 {:.4} (tol {FIXTURE_TOL}); RF accuracy {:.6} = {}/{} (tol {ACCURACY_TOL})",
            c.precision,
            c.recall,
            c.f1,
            rf.accuracy,
            cm.trace(),
            cm.total()
        ),
    )
}

fn floor_pow(h: &Rational, k: u32) -> num_bigint::BigInt {
    let p = num_traits::pow(h.clone(), k as usize);
    p.numer() / p.denom()
}

fn c14() -> Outcome {
    let mut r = stream(SEED, 14);
    let mut notes = Vec::new();

    let mut wgcd_bad = 0;
    let mut idem_bad = 0;
    for i in 0..10_000 {
        let system = if i % 2 == 0 { WeightSystem::igusa() } else { WeightSystem::halved() };
        let base: Vec<i64> = (0..4).map(|_| r.gen_range(-10_000..=10_000)).collect();
        if base.iter().all(|&x| x == 0) {
            continue;
        }
        let w = WeightedPoint::from_i64(&base, system).unwrap();
        let d: i64 = r.gen_range(1..=6);
        let w = scale_int(&d.into(), &w).unwrap();
        let g = wgcd(&w);
        if !(w.content() % &g).is_zero() || !(&g % num_bigint::BigUint::from(d as u64)).is_zero() {
            wgcd_bad += 1;
        }
        let n = normalize(&w);
        let a = abs_normalize(&w);
        if normalize(&n) != n || abs_normalize(&a) != a || !wgcd(&n).is_one() {
            idem_bad += 1;
        }
    }
    notes.push(format!("wgcd | gcd failures {wgcd_bad}, idempotence failures {idem_bad} on 10^4 tuples"));

    let mut height_bad = 0;
    let mut cases = 0;
    for h in [q(1, 1), q(2, 1), q(3, 1), q(3, 2), q(5, 3), q(7, 2)] {
        for i in 0..4 {
            let k = [2u32, 4, 6, 10][i];
            let top = floor_pow(&h, k);
            let exact = Rational::from_integer(top.clone()) == num_traits::pow(h.clone(), k as usize);
            for (x, leq, lt) in [(top.clone(), true, !exact), (&top + 1, false, false)] {
                let mut c = vec![num_bigint::BigInt::zero(); 4];
                c[i] = x;
                c[if i == 3 { 0 } else { 3 }] = num_bigint::BigInt::one();
                let p = WeightedPoint::new(c, WeightSystem::igusa()).unwrap();
                if !wgcd(&p).is_one() {
                    continue;
                }
                cases += 1;
                if height_leq(&p, &h, false).unwrap() != leq || height_leq(&p, &h, true).unwrap() != lt {
                    height_bad += 1;
                }
            }
        }
    }
    notes.push(format!("height boundary failures {height_bad} of {cases}"));

    let cfg = GenConfig { l2: 0, l3: 200, l5: 0, other: 9_800, l3_range: RationalRange::new(1_000, 1), ..GenConfig::default() };
    let d = generate_par(&cfg, SEED).unwrap();
    let text = dataset_to_string(&d).unwrap();
    let back = dataset_from_reader(text.as_bytes(), std::path::Path::new("round-trip")).unwrap();
    let identical = back == d && dataset_to_string(&back).unwrap() == text;
    notes.push(format!("JSONL round trip of {} records identical: {identical}", d.len()));

    outcome(wgcd_bad == 0 && idem_bad == 0 && height_bad == 0 && cases >= 24 && identical && d.len() == 10_000, notes.join("; "))
}

fn main() {
    let mut unexpected = Vec::new();
    let mut report = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let known = if !o.pass && KNOWN_FAILURES.contains(&id) { " [known]" } else { "" };
        println!("{verdict} {id:>2} {name}{known}: {} ({:.1?})", o.detail, t.elapsed());
        if !o.pass && !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    };
    report(1, "counting table", &mut c1);
    report(2, "shell identity", &mut c2);
    report(3, "even weights", &mut c3);
    report(4, "height-one enumeration", &mut c4);
    report(5, "L2 empty below 3/2", &mut c5);
    report(6, "L2 at height 3", &mut c6);
    report(7, "L3 table audit", &mut c7);
    report(8, "L3 consistency", &mut c8);
    report(9, "L2 generator soundness", &mut c9);
    report(10, "L5 constraint suite", &mut c10);
    let desk = desk_dataset();
    report(11, "classification at desk scale", &mut || c11(&desk));
    report(12, "clustering", &mut || c12(&desk));
    report(13, "metric fixtures", &mut c13);
    report(14, "arithmetic properties", &mut c14);
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
