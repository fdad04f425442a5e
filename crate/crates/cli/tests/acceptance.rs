//! Acceptance criteria 1 to 12: one PASS/FAIL line each.

use std::process::ExitCode;

use periodpoly_cli::checks::{self, tol};

fn pinned_tolerances() -> bool {
    let pins = [
        ("ω± absolute", tol::OMEGA_ABS, 1e-7),
        ("(f,f) absolute", tol::PETERSSON_ABS, 1e-9),
        ("κ agreement", tol::KAPPA_AGREEMENT, 1e-10),
        ("Γ₀(2) relative residual", tol::GAMMA02_REL, 1e-6),
        ("Γ₀(6) absolute", tol::GAMMA06_ABS, 1e-10),
        ("E₁₂ residual", tol::FULLLEVEL_RESIDUAL, 1e-8),
        ("table runtime s", tol::TABLE_SECONDS, 5.0),
        ("a₁₀₁ runtime s", tol::MANIN_101_SECONDS, 5.0),
        ("Γ₀(100) runtime s", tol::LEVEL_100_SECONDS, 600.0),
    ];
    let mut ok = checks::Q_TERMS <= 200;
    for (name, got, want) in pins {
        if got != want {
            println!("tolerance {name} is {got}, expected {want}");
            ok = false;
        }
    }
    ok
}

fn main() -> ExitCode {
    let mut failed = 0;
    if !pinned_tolerances() {
        failed += 1;
    }
    for c in checks::criteria() {
        let (ok, line) = checks::run(&c);
        println!("{line}");
        failed += usize::from(!ok);
    }
    if failed == 0 {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} failure(s)");
        ExitCode::FAILURE
    }
}
