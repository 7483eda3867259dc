//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria 6 and 9 fail on the signs of the `X+ X-` delta terms as
//! written. For those two the process only errors out if something other
//! than the sign-flipped delta lines fails; the printed verdict stays FAIL.

use std::process::Command;
use std::time::{Duration, Instant};
use superyang_cli::{run, RunConfig, SuiteName};
use superyang_core::exact::{int, rat, Poly, Rat, Var};
use superyang_core::gauss::{check_gauss, currents_from_kernel, decompose, Elimination};
use superyang_core::graded::GradedDims;
use superyang_core::hopf::check_hopf;
use superyang_core::lax::{check_rll, EvalModule, LaxKernel};
use superyang_core::matrix::Mat;
use superyang_core::relations::{
    check_gl11, check_relations, check_serre, xplus_m_sign_control, DeltaSign, RelationConfig,
};
use superyang_core::report::{CheckReport, Status};
use superyang_core::rmatrix::{check_graded_ybe, check_structure, YbeMode};
use superyang_core::series::{delta_series, distribution_series};

const MATRIX: [(usize, usize); 4] = [(1, 1), (2, 1), (1, 2), (2, 2)];

struct Verdict {
    pass: bool,
    detail: String,
    /// Failing, but only in the documented way.
    expected_failure: bool,
}

impl Verdict {
    fn of(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into(), expected_failure: false }
    }
}

fn gl(m: usize, n: usize) -> GradedDims {
    GradedDims::new(m, n).unwrap()
}

fn module(dims: GradedDims, a: i64) -> EvalModule {
    EvalModule::new(dims, int(a), rat(1, 2)).unwrap()
}

/// Kernels the current-based criteria use: one evaluation module and the
/// two-site monodromy.
fn kernels(dims: GradedDims) -> Vec<LaxKernel> {
    let (a, b) = (module(dims, 3), module(dims, 5));
    vec![LaxKernel::evaluation(&a).unwrap(), LaxKernel::monodromy(&a, &b).unwrap()]
}

fn failures(rs: &[CheckReport]) -> Vec<&CheckReport> {
    rs.iter().filter(|r| r.is_failure()).collect()
}

fn first_failure(rs: &[CheckReport]) -> String {
    match failures(rs).first() {
        Some(r) => format!("first failure {}/{} {:?}", r.suite, r.name, r.params),
        None => String::new(),
    }
}

/// The failure is one of the delta lines whose right-hand side has the
/// opposite overall sign.
fn is_sign_flipped_delta_line(r: &CheckReport) -> bool {
    (r.name.starts_with("XplusXminus-") || r.name == "gl11-line") && r.notes.iter().any(|n| n.contains("opposite overall sign"))
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let el = t.elapsed();
    (el < limit, format!("{:.1}s of {}s", el.as_secs_f64(), limit.as_secs()))
}

fn c1_ybe() -> Verdict {
    let t = Instant::now();
    let mut reports = Vec::new();
    for (m, n) in MATRIX {
        for h in [rat(1, 2), int(1), rat(3, 7)] {
            reports.extend(check_graded_ybe(gl(m, n), &h, YbeMode::Symbolic).unwrap());
        }
    }
    let eqs: Vec<_> = reports.iter().filter(|r| r.name != "ybe-sign-stripped").collect();
    let ok = eqs.iter().all(|r| r.status == Status::Pass) && eqs.len() == 4 * 3 * 4;
    let (fast, time) = within(t, Duration::from_secs(30));
    Verdict::of(ok && fast, format!("{} symbolic identities, {time} {}", eqs.len(), first_failure(&reports)))
}

fn c2_structure() -> Verdict {
    let mut reports = Vec::new();
    for (m, n) in MATRIX {
        for h in [rat(1, 2), int(1), rat(3, 7)] {
            reports.extend(check_structure(gl(m, n), &h).unwrap());
        }
    }
    let needed = ["unitarity", "pt-symmetry", "r-at-zero"];
    let count = |name: &str| reports.iter().filter(|r| r.name == name && r.status == Status::Pass).count();
    let ok = needed.iter().all(|n| count(n) == 12) && failures(&reports).is_empty();
    Verdict::of(ok, format!("unitarity, PT and R(0)=P on 12 matrices {}", first_failure(&reports)))
}

fn c3_controls() -> Verdict {
    let mut detected = Vec::new();
    for (m, n) in MATRIX {
        let rs = check_graded_ybe(gl(m, n), &rat(1, 2), YbeMode::Symbolic).unwrap();
        let c = rs.iter().find(|r| r.name == "ybe-sign-stripped");
        detected.push((format!("ybe-sign-stripped gl({m}|{n})"), c.is_some_and(|c| c.status == Status::Pass)));
    }
    for (m, n) in [(1, 1), (2, 1)] {
        let dims = gl(m, n);
        let rs = check_rll(&module(dims, 3), &module(dims, 5), superyang_core::lax::RllForm::Theta, 6).unwrap();
        let c = rs.iter().find(|r| r.name == "rll-wrong-direction");
        detected.push((format!("rll-wrong-direction gl({m}|{n})"), c.is_some_and(|c| c.status == Status::Pass)));
        for k in kernels(dims) {
            let c = xplus_m_sign_control(&k, 6, &RelationConfig::default());
            detected.push((format!("xplus-m-sign-flip gl({m}|{n})"), c.status == Status::Pass));
        }
    }
    let missed: Vec<_> = detected.iter().filter(|(_, d)| !d).map(|(s, _)| s.as_str()).collect();
    Verdict::of(missed.is_empty(), format!("{} controls, undetected: {missed:?}", detected.len()))
}

fn c4_rll() -> Verdict {
    let t = Instant::now();
    let mut reports = Vec::new();
    for (m, n) in [(1, 1), (2, 1)] {
        for (a, b) in [(3, 5), (3, -7)] {
            let dims = gl(m, n);
            reports.extend(check_rll(&module(dims, a), &module(dims, b), superyang_core::lax::RllForm::All, 8).unwrap());
        }
    }
    let (fast, time) = within(t, Duration::from_secs(120));
    let ok = failures(&reports).is_empty() && reports.iter().any(|r| r.name == "rll-component");
    Verdict::of(ok && fast, format!("{} reports, {time} {}", reports.len(), first_failure(&reports)))
}

fn block(entries: [[i64; 2]; 2]) -> Mat {
    Mat::from_fn(2, |i, j| int(entries[i][j]))
}

fn c5_gauss() -> Verdict {
    let mut reports = Vec::new();
    for (m, n) in MATRIX {
        for k in kernels(gl(m, n)) {
            reports.extend(check_gauss(&k, 8).unwrap());
        }
    }
    let recon = reports.iter().filter(|r| r.name == "reconstruction").count();
    // Identity: every factor trivial.
    let id: Vec<Vec<Mat>> =
        (0..3).map(|i| (0..3).map(|j| if i == j { Mat::identity(2) } else { Mat::zeros(2) }).collect()).collect();
    let g = decompose(&id, Elimination::Schur).unwrap();
    let mut oracle = (1..=3).all(|i| g.k(i).unwrap() == &Mat::identity(2))
        && (1..=3).all(|i| (1..i).all(|j| g.e(i, j).unwrap() == &Mat::zeros(2) && g.f(j, i).unwrap() == &Mat::zeros(2)));
    // Noncommuting 2×2 blocks: k1 = A, e21 = C A⁻¹, f12 = A⁻¹ B,
    // k2 = D - C A⁻¹ B, worked out by hand.
    let (a, b, c, d) = (block([[2, 1], [1, 1]]), block([[0, 1], [3, 0]]), block([[1, 0], [4, 1]]), block([[5, 2], [1, 7]]));
    let l = vec![vec![a.clone(), b], vec![c, d]];
    let e21 = block([[1, -1], [3, -2]]);
    let f12 = block([[-3, 1], [6, -1]]);
    let k2 = block([[8, 1], [7, 4]]);
    for how in [Elimination::Schur, Elimination::Doolittle] {
        let g = decompose(&l, how).unwrap();
        oracle &= g.k(1).unwrap() == &a && g.e(2, 1).unwrap() == &e21 && g.f(1, 2).unwrap() == &f12 && g.k(2).unwrap() == &k2;
    }
    let ok = failures(&reports).is_empty() && recon > 0 && oracle;
    Verdict::of(ok, format!("{recon} reconstructions, hand oracle {} {}", if oracle { "matches" } else { "differs" }, first_failure(&reports)))
}

fn relations_for(dims: GradedDims, cfg: &RelationConfig, order: i32) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for k in kernels(dims) {
        let cs = currents_from_kernel(&k, order).unwrap();
        out.extend(check_relations(&cs, &rat(1, 2), cfg));
        if (dims.m, dims.n) == (1, 1) {
            out.extend(check_gl11(&cs, &rat(1, 2), cfg).unwrap());
        }
    }
    out
}

fn c6_relations() -> (Verdict, Verdict) {
    let mut stated = Vec::new();
    let mut corrected = Vec::new();
    let fixed = RelationConfig { delta_sign: DeltaSign::Corrected, only: None };
    for (m, n) in [(1, 1), (2, 1)] {
        stated.extend(relations_for(gl(m, n), &RelationConfig::default(), 8));
        corrected.extend(relations_for(gl(m, n), &fixed, 8));
    }
    let bad = failures(&stated);
    let only_signs = bad.iter().all(|r| is_sign_flipped_delta_line(r));
    let gl11_lines = stated.iter().filter(|r| r.name == "gl11-line").count();
    let v = Verdict {
        pass: bad.is_empty(),
        detail: format!(
            "{} checks incl. {gl11_lines} gl(1|1) lines, {} fail: the delta terms need the opposite sign",
            stated.len(),
            bad.len()
        ),
        expected_failure: !bad.is_empty() && only_signs,
    };
    let info = Verdict::of(failures(&corrected).is_empty(), format!("corrected delta sign: {} checks {}", corrected.len(), first_failure(&corrected)));
    (v, info)
}

fn c7_serre() -> Verdict {
    let t = Instant::now();
    let mut reports = Vec::new();
    let mut gl22_time = Duration::ZERO;
    for (m, n) in [(2, 1), (2, 2)] {
        let s = Instant::now();
        let dims = gl(m, n);
        let two_site = kernels(dims).pop().unwrap();
        let cs = currents_from_kernel(&two_site, 6).unwrap();
        reports.extend(check_serre(&cs, &rat(1, 2), &RelationConfig::default()).into_iter().map(|r| r.param("dims", format!("{m}|{n}"))));
        if (m, n) == (2, 2) {
            gl22_time = s.elapsed();
        }
    }
    let passes = |dims: &str, name: &str| {
        reports.iter().filter(|r| r.name == name && r.params.get("dims").map(String::as_str) == Some(dims) && r.status == Status::Pass).count()
    };
    let needed = [("2|1", "serre1"), ("2|2", "serre1"), ("2|2", "serre2"), ("2|2", "serre3"), ("2|2", "serre4"), ("2|2", "extra-serre")];
    let missing: Vec<_> = needed.iter().filter(|(d, n)| passes(d, n) == 0).collect();
    let ok = failures(&reports).is_empty() && missing.is_empty() && gl22_time < Duration::from_secs(600);
    Verdict::of(
        ok,
        format!(
            "{} passes, gl(2|2) in {:.1}s, serre2 has no instance on gl(2|1), missing {missing:?} {} ({:.1}s)",
            reports.iter().filter(|r| r.status == Status::Pass).count(),
            gl22_time.as_secs_f64(),
            first_failure(&reports),
            t.elapsed().as_secs_f64()
        ),
    )
}

fn c8_delta() -> Verdict {
    let u_minus_v = Poly::var(Var::U).sub(&Poly::var(Var::V));
    let mut ok = true;
    for n in [2, 4, 8] {
        let p = delta_series(n).mul_poly(&u_minus_v).unwrap();
        ok &= p.is_zero() && p.windows()[0].len().unwrap_or(0) > 0;
    }
    // ι_∞ - ι_0 of 1/(u - a): coefficient of u^e is a^{-e-1}.
    for a in [int(2), int(-3)] {
        let d = distribution_series(&a, 1, Var::U, 4).unwrap();
        for e in -4..=4 {
            let k = -e - 1;
            let want = if k >= 0 { pow(&a, k as u32) } else { int(1) / pow(&a, (-k) as u32) };
            ok &= d.get(&[e]).unwrap().cloned().unwrap_or_else(|| int(0)) == want;
        }
    }
    Verdict::of(ok, "(u-v)δ(u-v) = 0 for N = 2, 4, 8; expansion difference for a = 2, -3")
}

fn pow(a: &Rat, k: u32) -> Rat {
    (0..k).fold(int(1), |acc, _| acc * a)
}

fn c9_hopf() -> (Verdict, Verdict) {
    let pts = [int(3), int(5), int(7)];
    let mut stated = Vec::new();
    let mut corrected = Vec::new();
    let fixed = RelationConfig { delta_sign: DeltaSign::Corrected, only: None };
    for (m, n) in [(1, 1), (2, 1)] {
        stated.extend(check_hopf(gl(m, n), &rat(1, 2), &pts, 6, &RelationConfig::default()).unwrap());
        corrected.extend(check_hopf(gl(m, n), &rat(1, 2), &pts, 6, &fixed).unwrap());
    }
    let count = |p: &str| stated.iter().filter(|r| r.name.starts_with(p) && r.status == Status::Pass).count();
    let axioms = ["counit", "antipode", "coassociativity"].iter().all(|p| count(p) > 0);
    let bad = failures(&stated);
    let v = Verdict {
        pass: bad.is_empty() && axioms,
        detail: format!(
            "{} checks; counit {}, antipode {}, coassociativity {} pass; {} Δ-image lines fail on the delta sign",
            stated.len(),
            count("counit"),
            count("antipode"),
            count("coassociativity"),
            bad.len()
        ),
        expected_failure: !bad.is_empty() && axioms && bad.iter().all(|r| is_sign_flipped_delta_line(r)),
    };
    let info = Verdict::of(failures(&corrected).is_empty(), format!("corrected delta sign: {} checks {}", corrected.len(), first_failure(&corrected)));
    (v, info)
}

fn superyang(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_superyang")).args(args).output().unwrap();
    (out.status.code(), out.stdout)
}

fn c10_determinism() -> Verdict {
    let args = ["all", "--m", "1", "--n", "1", "--points", "3,5,7", "--json", "-"];
    let (c1, a) = superyang(&args);
    let (c2, b) = superyang(&args);
    let same = a == b && !a.is_empty();
    let mut corrected = args.to_vec();
    corrected.extend(["--delta-sign", "corrected"]);
    let (c_ok, _) = superyang(&corrected);
    let (c_usage, _) = superyang(&["relations", "--m", "0", "--n", "1"]);
    // The library agrees with the binary.
    let mut cfg = RunConfig::new(1, 1);
    cfg.points = vec![int(3), int(5), int(7)];
    cfg.suites = [SuiteName::Gl11].into_iter().collect();
    let lib_code = run(&cfg).unwrap().exit_code();
    let codes = c1 == Some(1) && c2 == Some(1) && c_ok == Some(0) && c_usage == Some(2) && lib_code == 1;
    Verdict::of(same && codes, format!("byte-identical: {same}; exit codes fail={c1:?} pass={c_ok:?} usage={c_usage:?}"))
}

fn main() {
    // `cargo test -- --list` and filters: nothing to enumerate.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let (c6, c6_info) = c6_relations();
    let (c9, c9_info) = c9_hopf();
    let rows: Vec<(&str, Verdict)> = vec![
        ("1 graded YBE", c1_ybe()),
        ("2 unitarity, PT, R(0)=P", c2_structure()),
        ("3 negative controls", c3_controls()),
        ("4 RLL forms", c4_rll()),
        ("5 Gauss decomposition", c5_gauss()),
        ("6 defining relations", c6),
        ("7 Serre relations", c7_serre()),
        ("8 formal delta", c8_delta()),
        ("9 Hopf structure", c9),
        ("10 determinism and exit codes", c10_determinism()),
    ];
    let mut unexpected = Vec::new();
    for (name, v) in &rows {
        println!("criterion {name}: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.detail.trim());
        if !v.pass && !v.expected_failure {
            unexpected.push(*name);
        }
    }
    for (name, v) in [("6", &c6_info), ("9", &c9_info)] {
        println!("info {name} with corrected delta sign: {} ({})", if v.pass { "PASS" } else { "FAIL" }, v.detail.trim());
        if !v.pass {
            unexpected.push(name);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
