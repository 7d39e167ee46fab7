use std::fmt::Write;

use ltower_core::analysis::{EllFit, N0Status, PrimeAnalysisReport};
use ltower_core::io::{LevelEntry, OmegaDigest, PolyDigest, PrimeDigest, RunReport};
use ltower_core::OmegaVerdict;

pub fn levels(rows: &[LevelEntry]) -> String {
    let mut out = String::new();
    for row in rows {
        let mark = if row.matrix_tree_checked { "  [Matrix-Tree checked]" } else { "" };
        let omega = if row.factorization_complete {
            format!("omega = {}", row.omega)
        } else {
            format!("omega >= {}", row.omega)
        };
        writeln!(out, "kappa_{} = {} = {}  ({omega}){mark}", row.level, row.kappa, row.factorization).unwrap();
    }
    out
}

/// `mu ell^n + lambda n + nu` with zero terms dropped.
pub fn law(mu: i64, ell: u64, lambda: i64, nu: i64) -> String {
    let mut terms: Vec<(i64, String)> = Vec::new();
    if mu != 0 {
        terms.push((mu, format!("{ell}^n")));
    }
    if lambda != 0 {
        terms.push((lambda, "n".into()));
    }
    if nu != 0 || terms.is_empty() {
        terms.push((nu, String::new()));
    }
    let mut out = String::new();
    for (i, (c, var)) in terms.iter().enumerate() {
        let mag = c.unsigned_abs();
        if i == 0 {
            if *c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if *c < 0 { " - " } else { " + " });
        }
        if var.is_empty() {
            write!(out, "{mag}").unwrap();
        } else if mag == 1 {
            out.push_str(var);
        } else {
            write!(out, "{mag} {var}").unwrap();
        }
    }
    out
}

/// Least `n` from which the law agrees with every computed value.
fn matches_from(observed: &[u32], f: impl Fn(u32) -> Option<i64>) -> Option<u32> {
    let mut from = None;
    for n in (0..observed.len() as u32).rev() {
        if f(n) == Some(observed[n as usize] as i64) {
            from = Some(n);
        } else {
            break;
        }
    }
    from
}

pub fn prime(r: &PrimeAnalysisReport) -> String {
    let mut out = String::new();
    let p = r.p;
    writeln!(out, "p = {p}, ell = {}", r.ell).unwrap();
    writeln!(out, "mu_p = {}", r.mu).unwrap();
    match r.n0_status {
        N0Status::Certified => writeln!(out, "n0 = {} (certified)", r.n0).unwrap(),
        N0Status::Empirical { checked_up_to } => {
            writeln!(out, "n0 = {} (empirical, levels up to {checked_up_to} scanned)", r.n0).unwrap()
        }
    }
    match r.nu {
        Some(nu) => writeln!(out, "nu_p = {nu}").unwrap(),
        None => writeln!(out, "nu_p = unknown (norm out of reach)").unwrap(),
    }
    if !r.bad_levels.is_empty() {
        let bad: Vec<String> = r.bad_levels.iter().map(u32::to_string).collect();
        writeln!(out, "levels where p divides the norm: {}", bad.join(", ")).unwrap();
    }
    if let Some(s) = &r.stabilization {
        let log = s.log_bound.map_or("none".to_string(), |b| format!("{b:.4}"));
        writeln!(
            out,
            "stabilization: deg(U mod p) = {}, n1 = {}, r = {}, log bound = {log} (level {})",
            s.reduced_degree, s.n1, s.eventual_prime_count, s.log_level
        )
        .unwrap();
    }
    if r.divides_any == Some(false) {
        writeln!(out, "{p} never divides kappa_n").unwrap();
    } else if let Some(nu) = r.nu {
        let mu = r.mu as i64;
        let ell = r.ell as i64;
        let from = matches_from(&r.observed, |n| ell.checked_pow(n).map(|v| mu * v + nu));
        let tail = match from {
            Some(k) if k < r.n0 => format!("; matches the computed values from n = {k}"),
            _ => String::new(),
        };
        writeln!(out, "law: ord_{p}(kappa_n) = {} for n >= {}{tail}", law(mu, r.ell, 0, nu), r.n0).unwrap();
    }
    writeln!(out, "{:>3}  {:>12}  {:>12}", "n", "observed", "predicted").unwrap();
    for (n, (o, pr)) in r.observed.iter().zip(&r.predicted).enumerate() {
        let pr = pr.map_or("?".to_string(), |v| v.to_string());
        writeln!(out, "{n:>3}  {o:>12}  {pr:>12}").unwrap();
    }
    writeln!(out, "law holds at all computed levels >= n0: {}", if r.law_holds() { "yes" } else { "NO" }).unwrap();
    out
}

pub fn ell_fit(ell: u64, observed: &[u32], fit: Option<EllFit>) -> String {
    let mut out = String::new();
    let vals: Vec<String> = observed.iter().map(u32::to_string).collect();
    writeln!(out, "ord_{ell}(kappa_n), n = 0..{}: {}", observed.len() - 1, vals.join(", ")).unwrap();
    match fit {
        Some(f) => writeln!(
            out,
            "ell-part: mu = {}, lambda = {}, nu = {}; ord_{ell}(kappa_n) = {} for n >= {}",
            f.mu,
            f.lambda,
            f.nu,
            law(f.mu, ell, f.lambda, f.nu),
            f.onset
        )
        .unwrap(),
        None => writeln!(out, "ell-part: no law mu ell^n + lambda n + nu fits the computed tail").unwrap(),
    }
    out
}

fn poly(d: &PolyDigest) -> String {
    let mut out = String::new();
    for (i, (e, c)) in d.terms.iter().enumerate() {
        let neg = c.starts_with('-');
        let mag = c.trim_start_matches('-');
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match e.as_str() {
            "0" => String::new(),
            "1" => "T".into(),
            _ => format!("T^{e}"),
        };
        if var.is_empty() {
            out.push_str(mag);
        } else if mag == "1" {
            out.push_str(&var);
        } else {
            write!(out, "{mag}{var}").unwrap();
        }
    }
    if let Some(m) = &d.exponent_modulus {
        write!(out, "  (exponents mod {m})").unwrap();
    }
    out
}

pub fn omega(o: &OmegaDigest) -> String {
    let mut out = String::new();
    writeln!(out, "verdict: {}", o.verdict).unwrap();
    if o.verdict == OmegaVerdict::Inapplicable {
        writeln!(out, "voltages are not all rational integers; no criterion applies").unwrap();
        return out;
    }
    let mut parts = vec![o.content.clone().unwrap_or_default()];
    if let Some(m) = o.m {
        parts.push(if m == 1 { "(T - 1)".into() } else { format!("(T - 1)^{m}") });
    }
    for (d, e) in &o.cyclotomic_factors {
        parts.push(if *e == 1 { format!("Phi_{d}") } else { format!("Phi_{d}^{e}") });
    }
    if let Some(rest) = &o.non_cyclotomic_part {
        if !(rest.terms.len() == 1 && rest.terms[0] == ("0".to_string(), "1".to_string())) {
            parts.push(format!("({})", poly(rest)));
        }
    }
    writeln!(out, "U(T) = {}", parts.join(" * ")).unwrap();
    writeln!(
        out,
        "content primes: {}",
        if o.content_primes.is_empty() { "none".into() } else { o.content_primes.join(", ") }
    )
    .unwrap();
    out
}

fn prime_digest(d: &PrimeDigest, ell: u64) -> String {
    let nu = d.nu.map_or("?".to_string(), |v| v.to_string());
    let cert = if d.n0_certified { "" } else { " (empirical)" };
    let obs: Vec<String> = d.observed.iter().map(u32::to_string).collect();
    let pred: Vec<String> = d.predicted.iter().map(|v| v.map_or("?".into(), |v| v.to_string())).collect();
    let mut line = format!(
        "p = {:>5}: mu = {}, n0 = {}{cert}, nu = {nu}, observed [{}], predicted [{}], law {}",
        d.p,
        d.mu,
        d.n0,
        obs.join(", "),
        pred.join(", "),
        if d.law_holds { "holds" } else { "FAILS" }
    );
    if let (Some(n1), Some(b)) = (d.n1, d.log_bound) {
        write!(line, ", n1 = {n1}, log bound = {b:.4}").unwrap();
    }
    if d.divides_any == Some(false) {
        write!(line, ", never divides kappa_n (ell = {ell})").unwrap();
    }
    line
}

pub fn report(r: &RunReport) -> String {
    let mut out = String::new();
    writeln!(out, "ell = {}, precision = {}, integral voltages: {}", r.ell, r.precision, r.integral).unwrap();
    writeln!(out, "f(T) = {}", poly(&r.f)).unwrap();
    out.push('\n');
    for row in &r.levels {
        if let Some(n) = &row.norm {
            writeln!(out, "N_{} = {n}", row.level).unwrap();
        }
    }
    out.push_str(&levels(&r.levels));
    out.push('\n');
    for d in &r.primes {
        writeln!(out, "{}", prime_digest(d, r.ell)).unwrap();
    }
    out.push('\n');
    out.push_str(&omega(&r.omega));
    match r.ell_fit {
        Some(f) => {
            writeln!(out, "ell-part: mu = {}, lambda = {}, nu = {} from n = {}", f.mu, f.lambda, f.nu, f.onset).unwrap()
        }
        None => writeln!(out, "ell-part: no exact law on the computed levels").unwrap(),
    }
    writeln!(out, "time: {} ms", r.timing_ms).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws() {
        assert_eq!(law(1, 3, 0, 1), "3^n + 1");
        assert_eq!(law(1, 5, 0, -1), "5^n - 1");
        assert_eq!(law(0, 2, 5, -3), "5 n - 3");
        assert_eq!(law(0, 2, 0, 2), "2");
        assert_eq!(law(0, 5, 1, 0), "n");
    }
}
