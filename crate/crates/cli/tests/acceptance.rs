//! The twelve acceptance criteria, one line each.
//!
//! Runs without the libtest harness so that the summary lines appear in
//! order and unbuffered; any failure makes the process exit non-zero.

use std::process::Command;
use std::time::{Duration, Instant};

use wkl_cli::report::Case;
use wkl_cli::suites::{self, Options};
use wkl_core::{BlockSpec, RootDatum};

struct Outcome {
    pass: bool,
    summary: String,
}

fn from_cases(cases: Vec<Case>) -> Outcome {
    let failed: Vec<&Case> = cases.iter().filter(|c| !c.passed()).collect();
    let trials: usize = cases.iter().map(|c| c.trials.unwrap_or(1)).sum();
    let worst = cases
        .iter()
        .filter(|c| c.trials.is_some())
        .map(|c| c.measured)
        .fold(None, |a: Option<f64>, m| Some(a.map_or(m, |a| a.max(m))));
    let mut summary = format!("{} cases, {trials} trials", cases.len());
    if let Some(w) = worst {
        summary += &format!(", worst error {w:.2e}");
    }
    if !failed.is_empty() {
        let names: Vec<String> = failed
            .iter()
            .map(|c| format!("{} (measured {:.3e}{})", c.name, c.measured, c.detail.as_deref().map(|d| format!("; {d}")).unwrap_or_default()))
            .collect();
        summary += &format!("; failed: {}", names.join(", "));
    }
    Outcome { pass: failed.is_empty(), summary }
}

fn run_binary_twice() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_wkl"))
            .args(["verify", "--suite", "all", "--seed", "7", "--json"])
            .output()
            .expect("spawn wkl")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        pass: same,
        summary: format!(
            "{} bytes, runs {} (exit codes {:?}, {:?})",
            a.stdout.len(),
            if same { "identical" } else { "differ" },
            a.status.code(),
            b.status.code()
        ),
    }
}

fn main() {
    let o = Options::default();
    type Check = Box<dyn Fn() -> Outcome>;
    let criteria: Vec<(&str, Check)> = vec![
        ("SU(1,1) boost factorization closed form", Box::new(move || from_cases(suites::boost_closed_form(&o)))),
        (
            "cocycle and kernel identities, 1000 trials each",
            Box::new(move || {
                let mut cases = suites::cocycle(&o);
                cases.extend(suites::kernel_identities(&o));
                from_cases(cases)
            }),
        ),
        ("parabolic membership on SU(2,2)", Box::new(move || from_cases(suites::parabolic_membership(&o)))),
        ("restricted-root multiplicity tables", Box::new(move || from_cases(suites::roots(&o)))),
        ("Fock adjoint identity, D = 12", Box::new(move || from_cases(suites::fock_adjoint(&o)))),
        ("disk reproducing property", Box::new(move || from_cases(suites::disk_reproducing(&o)))),
        (
            "convergence dichotomy",
            Box::new(move || {
                let mut out = from_cases(suites::dichotomy(&o));
                let rho = RootDatum::build(BlockSpec::new(2, 1).unwrap()).unwrap().rho_constants().2;
                out.pass &= rho == vec![2.0];
                out.summary += &format!(", SU(2,1) rho = {rho:?}");
                out
            }),
        ),
        ("full vs reduced L² norm ratio", Box::new(move || from_cases(suites::full_vs_reduced(&o)))),
        ("N-equivariance of the lowest-K-type section", Box::new(move || from_cases(suites::n_equivariance(&o)))),
        ("multiplicity equals dim V", Box::new(move || from_cases(suites::multiplicity(&o)))),
        ("Whittaker vector at the origin and antiholomorphy", Box::new(move || from_cases(suites::whittaker_vectors(&o)))),
        ("determinism of verify --suite all", Box::new(run_binary_twice)),
    ];
    let mut failures = 0;
    let mut total = Duration::ZERO;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let dt = start.elapsed();
        total += dt;
        if !out.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}  {name}: {} [{:.2?}]",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.summary,
            dt
        );
    }
    println!("acceptance: {} of {} criteria passed in {:.2?}", criteria.len() - failures, criteria.len(), total);
    if failures > 0 {
        std::process::exit(1);
    }
}
