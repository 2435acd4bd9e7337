//! Acceptance run: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines show up in plain `cargo test` output.
//!
//! Exits nonzero when any criterion fails, except lines marked as known
//! discrepancies in the expected values themselves, which are printed as
//! FAIL and explained but do not fail the run.

use std::time::Instant;

use curvelrc::artifact::CodeArtifact;
use curvelrc::code::LrcCode;
use curvelrc::curve::{self, Place};
use curvelrc::ecurve::{self, condition_13_14_check, Condition14, EcAutomorphism, WeierstrassCurve};
use curvelrc::gf::{Fe, Field};
use curvelrc::linalg::DEFAULT_SUBSET_CAP;
use curvelrc::par::Exec;
use curvelrc::recipes::{
    eff_involution, eff_order_three, genus2, hermitian, hyperelliptic, normtrace, BasisSpec, Orientation,
};
use curvelrc::repairsim::{run_campaign, sweep_patterns};
use curvelrc::scurve::{self, Maximality, SuperellipticCurve};
use curvelrc::verify::{
    check_locality, designed_weight_certificate, min_distance_exhaustive, singleton_defect, verify_code,
    AppendixCheck, DistanceMode, DistanceVerdict, Exhaustive, Verdict, VerifyOptions, DEFAULT_BUDGET,
};

struct Run {
    failed: Vec<String>,
}

impl Run {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        println!("criterion {id}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id.to_string());
        }
    }

    /// A FAIL that reflects an inconsistent expected value rather than a
    /// defect in the code; reported, not counted.
    fn known_discrepancy(&mut self, id: &str, detail: String) {
        println!("criterion {id}: FAIL (known discrepancy, not counted) | {detail}");
    }
}

fn exact(code: &LrcCode, exec: Exec) -> Option<usize> {
    match min_distance_exhaustive(code, DEFAULT_BUDGET, exec) {
        Exhaustive::Exact { d, .. } => Some(d),
        Exhaustive::Abstained { .. } => None,
    }
}

fn params(code: &LrcCode) -> (usize, usize, usize) {
    (code.n, code.k, code.d_designed)
}

fn criterion_1(run: &mut Run) {
    let start = Instant::now();
    let code = genus2(25, None).unwrap().build(1, 6).unwrap();
    let modulus_ok = code.field.modulus() == [2, 4, 1];
    let d = exact(&code, Exec::Sequential);
    let loc = check_locality(&code, Exec::Sequential);
    let groups_ok = loc.len() == 6 && loc.iter().all(|g| g.ok && g.size == 6 && g.rank == 4 && g.mds == Some(true) && g.distance() == Some(3));
    let defect = d.map(|d| singleton_defect(code.n, code.k, d, code.r, code.delta));
    let secs = start.elapsed().as_secs_f64();
    let ok = modulus_ok && params(&code) == (36, 5, 30) && d == Some(30) && groups_ok && defect == Some(0) && secs <= 300.0;
    run.line(
        "1 reference example [36,5,30]_25",
        ok,
        format!(
            "modulus u^2+4u+2: {modulus_ok}; [n,k] = [{}, {}]; exhaustive d = {d:?} over {} nonzero messages; \
             6 groups [6,4,3] MDS: {groups_ok}; defect {defect:?}; {secs:.2}s single-threaded",
            code.n,
            code.k,
            25u64.pow(5) - 1
        ),
    );
}

fn criterion_2(run: &mut Run) {
    let code = hermitian(3, 1, 2, 0, None).unwrap().build(1, 5).unwrap();
    let report = verify_code(&code, &VerifyOptions { mode: DistanceMode::Exhaustive, ..VerifyOptions::default() });
    let ok = params(&code) == (15, 3, 12)
        && code.q() == 9
        && report.distance == DistanceVerdict::Exact { d: 12, messages: 728 }
        && report.singleton_defect == 0
        && report.verdict == Verdict::Exact;
    run.line("2 hermitian [15,3,12]_9", ok, format!("{:?}, defect {}", report.distance, report.singleton_defect));
}

fn criterion_3(run: &mut Run) {
    for (gp, expect) in [(0, (10, 4, 5)), (1, (10, 3, 5))] {
        let code = hyperelliptic(25, 2, gp, None).unwrap().build(1, 2).unwrap();
        let report = verify_code(&code, &VerifyOptions { mode: DistanceMode::Exhaustive, ..VerifyOptions::default() });
        let messages = 25u64.pow(code.k as u32) - 1;
        let ok = params(&code) == expect
            && report.distance == DistanceVerdict::Exact { d: 5, messages }
            && report.singleton_defect == 0
            && report.verdict == Verdict::Exact;
        run.line(
            &format!("3 genus-2 hyperelliptic g'={gp}"),
            ok,
            format!("[{}, {}, {}]_25, {:?}, defect {}", code.n, code.k, code.d_designed, report.distance, report.singleton_defect),
        );
    }
}

fn criterion_4(run: &mut Run) {
    let cases = [
        ("involution h=3", eff_involution(64, 3, Orientation::Primary, None).unwrap(), (12, 5, 6)),
        ("order-three", eff_order_three(64, Orientation::Primary, None).unwrap(), (18, 8, 9)),
    ];
    for (name, fam, expect) in cases {
        let code = fam.build(1, 2).unwrap();
        let rank_ok = code.generator.rank() == code.k;
        let blocks_ok = code.groups.iter().all(|g| {
            let block = code.generator.select_columns(&g.clone().collect::<Vec<_>>());
            block.row_space_basis().rows() == code.r
                && block
                    .row_space_basis()
                    .all_square_submatrices_invertible_with(DEFAULT_SUBSET_CAP, Exec::default())
                    .unwrap()
                    .is_all_invertible()
        });
        let cert = designed_weight_certificate(&code).map(|c| c.weight);
        let certify = verify_code(&code, &VerifyOptions { mode: DistanceMode::Certify, ..VerifyOptions::default() });
        let exhaustive = verify_code(&code, &VerifyOptions { mode: DistanceMode::Exhaustive, ..VerifyOptions::default() });
        let d = expect.2;
        let ok = params(&code) == expect
            && rank_ok
            && blocks_ok
            && cert == Ok(d)
            && certify.distance == DistanceVerdict::Certified { lower: d, upper: d }
            && certify.verdict == Verdict::Certified
            && certify.singleton_defect == 0
            && exhaustive.verdict == Verdict::Abstained
            && matches!(exhaustive.distance, DistanceVerdict::Abstained { .. });
        run.line(
            &format!("4 elliptic GF(64) {name}"),
            ok,
            format!(
                "[{}, {}, {}]_64; rank ok {rank_ok}; local minors invertible {blocks_ok}; certificate weight {cert:?}; \
                 {:?}; exhaustive {:?}",
                code.n, code.k, code.d_designed, certify.distance, exhaustive.distance
            ),
        );
    }
}

fn y2_y_x3(q: u32) -> WeierstrassCurve {
    let (p, e) = scurve::prime_power(q as u64).unwrap();
    let f = Field::new(p, e, None).unwrap();
    let z = Fe::ZERO;
    WeierstrassCurve::new(&f, [z, z, Fe::ONE, z, z]).unwrap()
}

fn isqrt(q: u64) -> u64 {
    (q as f64).sqrt().round() as u64
}

fn criterion_5(run: &mut Run) {
    let mut checked = Vec::new();
    let mut ok = true;
    for q in [4u32, 64] {
        let n = y2_y_x3(q).num_points();
        let want = q as u64 + 2 * isqrt(q as u64) + 1;
        ok &= n == want;
        checked.push(format!("E/F{q}: {n}"));
    }
    // Norm-Trace curves, every admissible (qbar, s, b, c) with q <= 81.
    let mut nt = 0;
    for (qbar, s) in [(2u64, 2u32), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (5, 2), (7, 2), (8, 2), (9, 2)] {
        let q = qbar.pow(s);
        if q > 81 {
            continue;
        }
        let (p, e) = scurve::prime_power(qbar).unwrap();
        let f = Field::new(p, e * s, None).unwrap();
        let full = (q - 1) / (qbar - 1);
        for b in (1..full).filter(|b| full % b == 0) {
            for c in (1..s).filter(|c| s % c == 0) {
                if let Ok(curve) = scurve::norm_trace_curve(&f, qbar, s, b, c) {
                    let got = curve.num_places();
                    let want = scurve::norm_trace_count(qbar, s, b, c);
                    ok &= got == want;
                    nt += 1;
                }
            }
        }
    }
    checked.push(format!("{nt} norm-trace curves"));
    // Maximal Hermitian-type curves y^((qbar+1)/b) = x^qbar + x over GF(qbar^2).
    let mut herm = 0;
    for qbar in [2u64, 3, 4, 5, 7, 8, 9] {
        let (p, e) = scurve::prime_power(qbar).unwrap();
        let f = Field::new(p, 2 * e, None).unwrap();
        for b in (1..=qbar).filter(|b| (qbar + 1) % b == 0) {
            let m = ((qbar + 1) / b) as u32;
            let curve = SuperellipticCurve::from_terms(&f, m, &[(qbar as usize, Fe::ONE), (1, Fe::ONE)], Fe::ONE).unwrap();
            let g = (m as u64 - 1) * (qbar - 1) / 2;
            let q = qbar * qbar;
            let want = q + 1 + 2 * g * qbar;
            ok &= curve.num_places() == want && curve.maximality_check().unwrap().0 == Maximality::Maximal;
            herm += 1;
        }
    }
    checked.push(format!("{herm} hermitian-type curves"));
    let f25 = Field::new(5, 2, Some(&[2, 4, 1])).unwrap();
    let c = SuperellipticCurve::from_terms(&f25, 2, &[(5, Fe::ONE), (1, Fe::ONE)], Fe::ONE).unwrap();
    let n = c.num_places();
    ok &= n == 25 + 1 + 2 * 2 * 5;
    checked.push(format!("y^2=x^5+x over F25: {n} (maximal)"));
    run.line("5 point counts equal closed forms", ok, checked.join("; "));
    if n == 66 {
        run.line("5 y^2=x^5+x over F25 has 66 places", true, "enumerated 66".into());
    } else {
        run.known_discrepancy(
            "5 y^2=x^5+x over F25 has 66 places",
            format!(
                "enumerated {n}; 66 exceeds the Hasse-Weil bound q + 1 + 2g*sqrt(q) = 46, so no genus-2 curve over F25 \
                 has 66 rational places"
            ),
        );
    }
}

fn criterion_6(run: &mut Run) {
    let c = y2_y_x3(64);
    let st = c.group_structure();
    let structure_ok = st.n1 == 9 && st.n2 == 9 && st.verify(&c);
    let set = c.point_set();
    let a = vec![EcAutomorphism::identity(), EcAutomorphism::negation(&c)];
    let mut details = vec![format!("Z/{} x Z/{} generators verified: {structure_ok}", st.n1, st.n2)];
    let mut ok = structure_ok;
    for h in [3u64, 9] {
        let sub = c.subgroup_of_order(&st, h).unwrap();
        let group = ecurve::th_a_group(&c, &sub, &a, &set).unwrap();
        let full = curve::orbits(&group, &set).iter().filter(|o| o.is_full()).count() as u64;
        let want = (81 - h) / (2 * h);
        ok &= sub.len() as u64 == h && c.is_subgroup(&sub) && group.len() as u64 == 2 * h && full == want;
        details.push(format!("h={h}: {full} full orbits (expected {want})"));
    }
    ok &= details[1].starts_with("h=3: 13 ");
    run.line("6 group structure over GF(64)", ok, details.join("; "));
}

fn all_codes() -> Vec<(String, LrcCode)> {
    let mut out = Vec::new();
    let mut add = |name: &str, code: LrcCode| out.push((name.to_string(), code));
    add("genus2 q=25 t=1 m=6", genus2(25, None).unwrap().build(1, 6).unwrap());
    add("genus2 q=25 t=2 m=6", genus2(25, None).unwrap().build(2, 6).unwrap());
    add("hermitian 3,1,2 t=1 m=5", hermitian(3, 1, 2, 0, None).unwrap().build(1, 5).unwrap());
    add("hermitian 3,1,2 t=2 m=5", hermitian(3, 1, 2, 0, None).unwrap().build(2, 5).unwrap());
    add("hermitian 3,1,1 t=1 m=2", hermitian(3, 1, 1, 0, None).unwrap().build(1, 2).unwrap());
    add("hermitian 2,2,1 t=1 m=3", hermitian(2, 2, 1, 0, None).unwrap().build(1, 3).unwrap());
    for gp in [-1, 0, 1] {
        add(&format!("hyperelliptic q=25 g'={gp}"), hyperelliptic(25, 2, gp, None).unwrap().build(1, 2).unwrap());
    }
    add("hyperelliptic q=81 g'=0", hyperelliptic(81, 2, 0, None).unwrap().build(1, 3).unwrap());
    add("normtrace 2,2,1,1", normtrace(2, 2, 1, 1, 0, None).unwrap().build(1, 2).unwrap());
    add("normtrace 3,2,2,1", normtrace(3, 2, 2, 1, 0, None).unwrap().build(1, 3).unwrap());
    for o in [Orientation::Primary, Orientation::Reversed] {
        add(&format!("involution q=64 h=3 {o:?}"), eff_involution(64, 3, o, None).unwrap().build(1, 2).unwrap());
        add(&format!("order-three q=64 {o:?}"), eff_order_three(64, o, None).unwrap().build(1, 2).unwrap());
    }
    out
}

fn criterion_7(run: &mut Run) {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut dual = 0;
    let mut swept = 0;
    let mut nonvacuous = 0;
    let mut total = 0;
    for (name, code) in all_codes() {
        let report = verify_code(&code, &VerifyOptions::default());
        let rank_ok = code.generator.rank() == code.t * code.r + 1;
        let agree = report.locality.iter().all(|g| g.methods_agree() != Some(false));
        dual += report.locality.iter().filter(|g| g.methods_agree() == Some(true)).count();
        let max_group = code.groups.iter().map(|g| g.len()).max().unwrap();
        let repair_ok = if max_group <= 10 {
            swept += 1;
            sweep_patterns(&code, code.delta - 1, 11).all_recovered()
        } else {
            run_campaign(&code, 200, code.delta - 1, 11, Exec::default()).recovery_rate == Some(1.0)
        };
        let appendix_ok = !code.optimal || report.appendix.ok();
        let passed = report.passed() && rank_ok && agree && report.locality_ok && repair_ok && appendix_ok;
        if !passed {
            notes.push(format!("{name}: {:?} {:?}", report.verdict, report.failures));
        }
        if report.appendix == AppendixCheck::Holds {
            nonvacuous += 1;
        }
        ok &= passed;
        total += 1;
    }
    notes.push(format!("{total} codes verified; length bound non-vacuous and satisfied for {nonvacuous}"));
    notes.push(format!("{dual} groups with both local methods agreeing; {swept} codes swept over all delta-1 patterns"));
    run.line("7 property suite on every constructed code", ok, notes.join("; "));
}

fn criterion_8(run: &mut Run) {
    // Mutating one generator entry of the reference artifact.
    let code = genus2(25, None).unwrap().build(1, 6).unwrap();
    let mut art = CodeArtifact::from_code(&code, None);
    let entry = &mut art.generator[1][2];
    entry[0] = (entry[0] + 1) % 5;
    let tampered = art.to_code().unwrap();
    let report = verify_code(&tampered, &VerifyOptions { mode: DistanceMode::Exhaustive, ..VerifyOptions::default() });
    let broke = !report.locality_ok || report.singleton_defect != 0 || !matches!(report.distance, DistanceVerdict::Exact { d: 30, .. });
    run.line(
        "8 tampered reference artifact is rejected",
        broke && report.verdict == Verdict::Failed,
        format!("locality ok {}, {:?}, defect {}", report.locality_ok, report.distance, report.singleton_defect),
    );

    // Every ordering of the defining orbit by its last two places, both
    // orientations: the tail-sum condition holds exactly when every local r x r
    // minor is invertible.
    let mut holds = 0;
    let mut violated = 0;
    let mut mismatches = Vec::new();
    for orientation in [Orientation::Primary, Orientation::Reversed] {
        let fam = eff_involution(64, 3, orientation, None).unwrap();
        let BasisSpec::Ladder { defining } = &fam.basis else { unreachable!() };
        let mut orbit = defining.clone();
        orbit.sort();
        let CurveModelW(c) = weierstrass(&fam.curve);
        for i in 0..orbit.len() {
            for j in 0..orbit.len() {
                if i == j {
                    continue;
                }
                let mut list: Vec<Place> = orbit.iter().copied().filter(|p| *p != orbit[i] && *p != orbit[j]).collect();
                list.push(orbit[i]);
                list.push(orbit[j]);
                if orientation == Orientation::Reversed {
                    list.reverse();
                }
                let cond = condition_13_14_check(&c, &list, &fam.groups, fam.r, fam.delta, DEFAULT_SUBSET_CAP).unwrap();
                let mut variant = fam.clone();
                variant.basis = BasisSpec::Ladder { defining: list };
                let invertible = match variant.build(1, fam.ell()) {
                    Ok(code) => code.groups.iter().all(|g| {
                        let block = code.generator.select_columns(&g.clone().collect::<Vec<_>>());
                        let basis = block.row_space_basis();
                        basis.rows() == code.r
                            && basis.all_square_submatrices_invertible_with(DEFAULT_SUBSET_CAP, Exec::default()).unwrap().is_all_invertible()
                    }),
                    Err(_) => false,
                };
                match cond {
                    Condition14::Holds => holds += 1,
                    Condition14::Violated { .. } => violated += 1,
                }
                if (cond == Condition14::Holds) != invertible {
                    mismatches.push(format!("{orientation:?} tail ({i},{j})"));
                }
            }
        }
    }
    run.line(
        "8 tail-sum condition <=> invertible local minors, GF(64) h=3",
        mismatches.is_empty() && holds > 0 && violated > 0,
        format!("{holds} tails satisfy, {violated} violate, mismatches {mismatches:?}"),
    );
}

struct CurveModelW(WeierstrassCurve);

fn weierstrass(c: &curvelrc::curve::CurveModel) -> CurveModelW {
    match c {
        curvelrc::curve::CurveModel::Weierstrass(w) => CurveModelW(w.clone()),
        _ => panic!("elliptic family"),
    }
}

fn main() {
    let mut run = Run { failed: Vec::new() };
    criterion_1(&mut run);
    criterion_2(&mut run);
    criterion_3(&mut run);
    criterion_4(&mut run);
    criterion_5(&mut run);
    criterion_6(&mut run);
    criterion_7(&mut run);
    criterion_8(&mut run);
    if run.failed.is_empty() {
        println!("acceptance: all counted criteria pass");
    } else {
        println!("acceptance: failing criteria {:?}", run.failed);
        std::process::exit(1);
    }
}
