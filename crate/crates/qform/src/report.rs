//! JSON and plain-text renderings of results.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use qform_core::decider::Step;
use qform_core::{
    CoverageReport, CrossCheckReport, ExclusionCertificate, Prime, QuadraticForm, Verdict, Witness,
};
use serde_json::{json, Value};

/// Integers that fit in `i64` become JSON numbers; larger ones become strings.
pub fn int(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(n) => json!(n),
        None => json!(v.to_string()),
    }
}

/// Decimal with an explicit sign.
pub fn signed(v: impl std::fmt::Display) -> String {
    let s = v.to_string();
    if s.starts_with('-') {
        s
    } else {
        format!("+{s}")
    }
}

fn signed_form(form: &QuadraticForm) -> String {
    let coeffs: Vec<String> = form.coefficients().iter().map(signed).collect();
    match form {
        QuadraticForm::Binary(_) => coeffs.join(","),
        QuadraticForm::General(g) => format!("{}; {}", g.rank(), coeffs.join(",")),
    }
}

fn fraction(num: &BigInt, den: &BigInt) -> String {
    format!("{num}/{den}")
}

fn steps_json(p: Prime, path: &[Step]) -> Value {
    path.iter()
        .map(|s| json!({"node": s.node.id(), "question": s.node.question(p), "answer": s.answer}))
        .collect()
}

/// `agreement` carries the two binary deciders' answers when both ran.
pub fn verdict_json(form: &QuadraticForm, v: &Verdict, agreement: Option<(bool, bool)>) -> Value {
    let mut out = json!({
        "form": form.to_string(),
        "p": v.prime.get(),
        "dense": v.dense,
        "path": steps_json(v.prime, &v.path),
        "theorem_tag": v.theorem_tag(),
        "reason": v.leaf.summary(),
        "k": v.factorization.as_ref().map(|f| f.k),
        "ell": v.factorization.as_ref().map(|f| int(&f.ell)),
    });
    if let Some((tree, square)) = agreement {
        out["deciders"] = json!({"tree": tree, "square_class": square});
    }
    out
}

pub fn verdict_plain(form: &QuadraticForm, v: &Verdict, agreement: Option<(bool, bool)>) -> String {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut s = String::new();
    let _ = writeln!(s, "form         {}", signed_form(form));
    let _ = writeln!(s, "prime        {}", signed(v.prime));
    let _ = writeln!(s, "dense        {}", yes_no(v.dense));
    let _ = writeln!(s, "theorem_tag  {}", v.theorem_tag());
    if let Some(f) = &v.factorization {
        let _ = writeln!(s, "k            {}", signed(f.k));
        let _ = writeln!(s, "ell          {}", signed(&f.ell));
    }
    if let Some((tree, square)) = agreement {
        let _ = writeln!(s, "tree         {}", yes_no(tree));
        let _ = writeln!(s, "square_class {}", yes_no(square));
    }
    s
}

pub fn explain_json(form: &QuadraticForm, v: &Verdict) -> Value {
    json!({
        "form": form.to_string(),
        "p": v.prime.get(),
        "steps": v.path.iter().enumerate().map(|(depth, s)| json!({
            "depth": depth,
            "node": s.node.id(),
            "question": s.node.question(v.prime),
            "answer": s.answer,
        })).collect::<Vec<_>>(),
        "dense": v.dense,
        "theorem_tag": v.theorem_tag(),
        "reason": v.leaf.summary(),
    })
}

pub fn explain_plain(form: &QuadraticForm, v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Q = {}, p = {}", signed_form(form), signed(v.prime));
    if let Some(f) = &v.factorization {
        let _ = writeln!(
            s,
            "disc = {} = {}^{} * {}",
            signed(&f.disc),
            v.prime,
            f.k,
            signed(&f.ell)
        );
    }
    for (depth, step) in v.path.iter().enumerate() {
        let answer = if step.answer { "yes" } else { "no" };
        let _ = writeln!(
            s,
            "{}{} {answer}",
            "  ".repeat(depth),
            step.node.question(v.prime)
        );
    }
    let verdict = if v.dense { "dense" } else { "not dense" };
    let _ = writeln!(
        s,
        "{}=> {verdict} [{}]: {}",
        "  ".repeat(v.path.len()),
        v.theorem_tag(),
        v.leaf.summary()
    );
    s
}

fn coords(v: &[BigInt]) -> Value {
    v.iter().map(int).collect()
}

pub fn witness_json(form: &QuadraticForm, p: Prime, w: &Witness) -> Value {
    let (x, y, z, ww) = match w.binary_coordinates() {
        Some([x, y, z, ww]) => (int(x), int(y), int(z), int(ww)),
        None => (
            coords(&w.numerator),
            Value::Null,
            coords(&w.denominator),
            Value::Null,
        ),
    };
    json!({
        "kind": "witness",
        "form": form.to_string(),
        "p": p.get(),
        "x": x,
        "y": y,
        "z": z,
        "w": ww,
        "target": fraction(&w.target_num, &w.target_den),
        "r": w.precision,
        "achieved_valuation": w.achieved.to_string(),
        "strategy": w.strategy.tag(),
    })
}

pub fn witness_plain(form: &QuadraticForm, p: Prime, w: &Witness) -> String {
    let list = |v: &[BigInt]| v.iter().map(signed).collect::<Vec<_>>().join(", ");
    let mut s = String::new();
    let _ = writeln!(s, "form         {}", signed_form(form));
    let _ = writeln!(s, "prime        {}", signed(p));
    let _ = writeln!(
        s,
        "target       {}/{}",
        signed(&w.target_num),
        signed(&w.target_den)
    );
    let _ = writeln!(s, "numerator    ({})", list(&w.numerator));
    let _ = writeln!(s, "denominator  ({})", list(&w.denominator));
    let _ = writeln!(s, "precision    {}", signed(w.precision));
    let achieved = w
        .achieved
        .finite()
        .map_or_else(|| "inf".to_string(), signed);
    let _ = writeln!(s, "achieved     {achieved}");
    let _ = writeln!(s, "strategy     {}", w.strategy);
    s
}

pub fn certificate_json(form: &QuadraticForm, c: &ExclusionCertificate) -> Value {
    json!({
        "kind": "certificate",
        "form": form.to_string(),
        "p": c.prime.get(),
        "target": fraction(&c.target_num, &c.target_den),
        "radius_exp": c.radius_exponent,
        "justification": c.justification.tag(),
        "reason": c.justification.summary(),
        "verified_bound": c.verified_bound,
    })
}

pub fn certificate_plain(form: &QuadraticForm, c: &ExclusionCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "form           {}", signed_form(form));
    let _ = writeln!(s, "prime          {}", signed(c.prime));
    let _ = writeln!(
        s,
        "not dense: no quotient q has v_p(q - {}) > {}",
        signed(&c.target_num),
        c.radius_exponent
    );
    let _ = writeln!(
        s,
        "justification  {} ({})",
        c.justification,
        c.justification.summary()
    );
    let _ = writeln!(s, "verified up to coordinates {}", signed(c.verified_bound));
    s
}

pub fn coverage_json(form: &QuadraticForm, c: &CoverageReport) -> Value {
    json!({
        "form": form.to_string(),
        "p": c.prime.get(),
        "r": c.r,
        "bound": c.bound,
        "covered_count": c.covered_count(),
        "missing": c.missing,
        "quotients_sampled": c.quotients_sampled,
    })
}

/// Missing classes as CSV rows `p,r,bound,residue`.
pub fn coverage_csv(c: &CoverageReport) -> String {
    let mut s = String::from("p,r,bound,residue\n");
    for m in &c.missing {
        let _ = writeln!(s, "{},{},{},{m}", c.prime, c.r, c.bound);
    }
    s
}

pub fn cross_check_json(form: &QuadraticForm, rep: &CrossCheckReport, agree: bool) -> Value {
    json!({
        "form": form.to_string(),
        "p": rep.verdict.prime.get(),
        "r": rep.coverage.r,
        "bound": rep.coverage.bound,
        "dense": rep.verdict.dense,
        "theorem_tag": rep.verdict.theorem_tag(),
        "deciders_agree": agree,
        "covered_count": rep.coverage.covered_count(),
        "discrepancies": rep.discrepancies,
        "violation": rep.violation,
        "pass": rep.passed() && agree,
    })
}

pub fn cross_check_row(form: &QuadraticForm, rep: &CrossCheckReport, agree: bool) -> String {
    let status = if rep.passed() && agree {
        "PASS"
    } else {
        "FAIL"
    };
    let mut row = format!(
        "{:<24} {:>4} {:>3} {:>6} {:<10} {:<30} {status}",
        signed_form(form),
        signed(rep.verdict.prime),
        signed(rep.coverage.r),
        signed(rep.coverage.bound),
        if rep.verdict.dense {
            "dense"
        } else {
            "not-dense"
        },
        rep.verdict.theorem_tag(),
    );
    if !agree {
        row.push_str("  deciders disagree");
    }
    if !rep.discrepancies.is_empty() {
        let _ = write!(row, "  residues {:?}", rep.discrepancies);
    }
    if let Some(v) = &rep.violation {
        let _ = write!(row, "  {v}");
    }
    row
}

pub fn cross_check_header() -> String {
    format!(
        "{:<24} {:>4} {:>3} {:>6} {:<10} {:<30} result",
        "form", "p", "r", "bound", "verdict", "theorem_tag"
    )
}
