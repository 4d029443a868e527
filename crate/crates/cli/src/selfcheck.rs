//! The invariant battery behind `posetcox selfcheck`.
//!
//! Suites run from small to large `n` and stop at the first failure, so the
//! reported instance is the smallest one that breaks.

use std::time::Instant;

use anyhow::Result;
use num_bigint::BigInt;
use posetcox::classify::{canonical_two_peak, cycle_index, detect_type_a};
use posetcox::congruence::{canonicalize, is_congruence, pair_congruence, verify_witness};
use posetcox::enumerate::{
    count_positive, count_principal_cycles, count_total, necklace_count, necklace_genfunc,
    oracle_enumerate_all_posets, oracle_enumerate_paths, oracle_enumerate_principal,
};
use posetcox::reflect::{extremal_elements, minmax_reflection, reflect_poset, reflection_matrix};
use posetcox::spectral::{quadratic_form, spectral_report};
use posetcox::{
    CanonicalTarget, IntMatrix, IntPolynomial, IntVector, MatrixOrder, PairOutcome, Poset,
    TypeAClass,
};

pub const MAX_N: usize = 12;
/// The all-posets sweep stops here unless n = 8 is explicitly allowed.
const ALL_POSETS_MAX_N: usize = 7;
const ORDER_CUTOFF: u64 = 1000;

#[derive(Debug, thiserror::Error)]
#[error("suite `{suite}` failed: {message}")]
pub struct CheckFailed {
    suite: &'static str,
    message: String,
    instance: Option<Poset>,
}

type Check = std::result::Result<(), CheckFailed>;

struct Suite {
    name: &'static str,
}

impl Suite {
    fn fail(&self, message: impl Into<String>, instance: Option<&Poset>) -> CheckFailed {
        CheckFailed {
            suite: self.name,
            message: message.into(),
            instance: instance.cloned(),
        }
    }

    fn ensure(
        &self,
        ok: bool,
        message: impl FnOnce() -> String,
        instance: Option<&Poset>,
    ) -> Check {
        if ok {
            Ok(())
        } else {
            Err(self.fail(message(), instance))
        }
    }
}

type SuiteFn<'a> = Box<dyn Fn(&Suite) -> Check + 'a>;

pub fn run(max_n: usize, allow_n8: bool) -> Result<()> {
    let corpus = build_corpus(max_n);
    let all_posets_n = if allow_n8 { 8 } else { ALL_POSETS_MAX_N }.min(max_n);
    let suites: Vec<(&'static str, SuiteFn)> = vec![
        ("reflection-examples", Box::new(check_reflection_examples)),
        ("formulas", Box::new(move |s| check_formulas(s, max_n))),
        ("two-peak", Box::new(move |s| check_two_peak(s, max_n))),
        ("reflections", Box::new(|s| check_reflections(s, &corpus))),
        ("witnesses", Box::new(|s| check_witnesses(s, &corpus))),
        (
            "all-posets",
            Box::new(move |s| check_all_posets(s, all_posets_n, allow_n8)),
        ),
    ];
    let total = Instant::now();
    for (name, body) in suites {
        let start = Instant::now();
        let outcome = body(&Suite { name });
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {name:<20} {elapsed:>8.3}s"),
            Err(failure) => {
                println!("FAIL {name:<20} {elapsed:>8.3}s");
                println!("{}", failure.message);
                if let Some(p) = &failure.instance {
                    println!("instance:");
                    print!("{}", p.to_text());
                }
                return Err(failure.into());
            }
        }
    }
    println!(
        "all suites passed for n <= {max_n} ({} corpus posets) in {:.3}s",
        corpus.len(),
        total.elapsed().as_secs_f64()
    );
    Ok(())
}

/// Every connected non-negative type A poset up to isomorphism with
/// `n <= max_n`, plus two relabelled copies of each.
fn build_corpus(max_n: usize) -> Vec<Poset> {
    let mut corpus = Vec::new();
    for n in 1..=max_n {
        let mut base = oracle_enumerate_paths(n).expect("n within oracle bound");
        if n >= 4 {
            let buckets = oracle_enumerate_principal(n).expect("n within oracle bound");
            base.extend(buckets.into_values().flatten());
        }
        for p in base {
            let reversed: Vec<usize> = (1..=n).rev().collect();
            let rotated: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
            let r1 = p.relabel(&reversed).expect("permutation");
            let r2 = p.relabel(&rotated).expect("permutation");
            corpus.extend([p, r1, r2]);
        }
    }
    corpus
}

fn example_j() -> Poset {
    Poset::new(5, &[(2, 1), (3, 1), (4, 1), (3, 2), (4, 2), (3, 5), (4, 5)]).expect("poset")
}

fn check_reflection_examples(s: &Suite) -> Check {
    let j = example_j();
    let c_j = IntMatrix::from_rows_i64(&[
        [1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [1, 1, 1, 0, 1],
        [1, 1, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ])
    .expect("square");
    let b1 = IntMatrix::from_rows_i64(&[
        [-1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
    ])
    .expect("square");
    let c_s1j = IntMatrix::from_rows_i64(&[
        [1, 1, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 1, 1, 0, 1],
        [0, 1, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ])
    .expect("square");
    s.ensure(
        j.incidence_matrix() == c_j,
        || "incidence matrix of J differs".into(),
        Some(&j),
    )?;
    let b = reflection_matrix(&j, 1).map_err(|e| s.fail(e.to_string(), Some(&j)))?;
    s.ensure(
        b == b1,
        || format!("reflection matrix at 1 is\n{b}expected\n{b1}"),
        Some(&j),
    )?;
    let product = &(&b.transpose() * &c_j) * &b;
    s.ensure(
        product == c_s1j,
        || format!("B^T C_J B is\n{product}expected\n{c_s1j}"),
        Some(&j),
    )?;
    let s1 = reflect_poset(&j, 1).map_err(|e| s.fail(e.to_string(), Some(&j)))?;
    s.ensure(
        s1.incidence_matrix() == c_s1j,
        || "S_1 J differs".into(),
        Some(&j),
    )?;

    // The reflection at 5 turns an indefinite poset into a positive one.
    let v = IntVector::from_i64s(&[-4, -4, 5, 7, -6]);
    let q = quadratic_form(&j, &v).map_err(|e| s.fail(e.to_string(), Some(&j)))?;
    s.ensure(
        q == BigInt::from(-10),
        || format!("q_J(v) = {q}, expected -10"),
        Some(&j),
    )?;
    let s5 = reflect_poset(&j, 5).map_err(|e| s.fail(e.to_string(), Some(&j)))?;
    let before = spectral_report(&j, 1);
    let after = spectral_report(&s5, 1);
    s.ensure(
        !before.nonnegative,
        || "J reported non-negative".into(),
        Some(&j),
    )?;
    s.ensure(
        after.nonnegative && after.corank == 0,
        || "S_5 J not reported positive".into(),
        Some(&s5),
    )
}

fn check_formulas(s: &Suite, max_n: usize) -> Check {
    for n in 1..=max_n {
        let paths = oracle_enumerate_paths(n).map_err(|e| s.fail(e.to_string(), None))?;
        let positive = count_positive(n);
        s.ensure(
            positive == BigInt::from(paths.len()),
            || {
                format!(
                    "n = {n}: formula gives {positive} positive posets, oracle {}",
                    paths.len()
                )
            },
            None,
        )?;
        let mut total = paths.len();
        if n >= 4 {
            let buckets = oracle_enumerate_principal(n).map_err(|e| s.fail(e.to_string(), None))?;
            for p in n.div_ceil(2)..=n - 2 {
                let found = buckets.get(&p).map_or(0, Vec::len);
                total += found;
                let formula =
                    count_principal_cycles(n, p).map_err(|e| s.fail(e.to_string(), None))?;
                s.ensure(
                    formula.clone() - 1u32 == BigInt::from(found),
                    || format!("n = {n}, p = {p}: formula gives {formula} - 1, oracle {found}"),
                    None,
                )?;
            }
        }
        let all = count_total(n);
        s.ensure(
            all == BigInt::from(total),
            || format!("n = {n}: total formula gives {all}, oracle {total}"),
            None,
        )?;
        let genfunc = necklace_genfunc(n);
        for (p, coeff) in genfunc.iter().enumerate() {
            let direct = necklace_count(p, n);
            s.ensure(
                *coeff == direct,
                || {
                    format!(
                        "n = {n}: generating function coefficient {p} is {coeff}, count {direct}"
                    )
                },
                None,
            )?;
        }
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_two_peak(s: &Suite, max_n: usize) -> Check {
    for n in 4..=max_n {
        for p in n.div_ceil(2)..=n - 2 {
            let poset = canonical_two_peak(n, p).map_err(|e| s.fail(e.to_string(), None))?;
            let inst = Some(&poset);
            let r = spectral_report(&poset, ORDER_CUTOFF);
            s.ensure(r.corank == 1, || format!("corank {}", r.corank), inst)?;
            let mut k = vec![0i64; n];
            k[0] = -1;
            k[1] = -1;
            k[n - 2] = 1;
            k[n - 1] = 1;
            let kv = IntVector::from_i64s(&k);
            s.ensure(
                r.kernel_basis.len() == 1
                    && (r.kernel_basis[0] == kv || r.kernel_basis[0] == kv.negated()),
                || format!("kernel basis {:?}", r.kernel_basis),
                inst,
            )?;
            let expected = IntPolynomial::principal_type(n, p);
            s.ensure(
                r.coxeter_polynomial == expected,
                || {
                    format!(
                        "Coxeter polynomial {} expected {expected}",
                        r.coxeter_polynomial
                    )
                },
                inst,
            )?;
            let linear = IntPolynomial::from_i64s(&[-1, 1]);
            let factored = &(&(&linear * &linear) * &IntPolynomial::geometric(p - 1))
                * &IntPolynomial::geometric(n - p - 1);
            s.ensure(
                factored == expected,
                || "factorisation differs".into(),
                inst,
            )?;
            let lcm = (p * (n - p)) as u64 / gcd(p as u64, (n - p) as u64);
            s.ensure(
                r.reduced_coxeter_number == Some(MatrixOrder::Finite(lcm)),
                || {
                    format!(
                        "reduced Coxeter number {:?}, expected {lcm}",
                        r.reduced_coxeter_number
                    )
                },
                inst,
            )?;
            let index = cycle_index(&poset).map_err(|e| s.fail(e.to_string(), inst))?;
            s.ensure(
                index == p,
                || format!("cycle index {index}, expected {p}"),
                inst,
            )?;
            s.ensure(
                r.coxeter_number == MatrixOrder::ExceedsCutoff,
                || format!("Coxeter number {:?} within cutoff", r.coxeter_number),
                inst,
            )?;
        }
    }
    Ok(())
}

fn check_reflections(s: &Suite, corpus: &[Poset]) -> Check {
    for p in corpus {
        let inst = Some(p);
        let c = p.incidence_matrix();
        for a in extremal_elements(p) {
            let step = minmax_reflection(p, a).map_err(|e| s.fail(e.to_string(), inst))?;
            let back = reflect_poset(&step.after, a).map_err(|e| s.fail(e.to_string(), inst))?;
            s.ensure(
                back == *p,
                || format!("reflection at {a} is not an involution"),
                inst,
            )?;
            s.ensure(
                (&step.matrix * &step.matrix).is_identity(),
                || format!("reflection matrix at {a} squares to a non-identity"),
                inst,
            )?;
            if step.congruence_certified {
                s.ensure(
                    is_congruence(&step.matrix, &c, &step.after.incidence_matrix()),
                    || format!("certified reflection at {a} is not a congruence"),
                    inst,
                )?;
            }
        }
    }
    Ok(())
}

fn check_witnesses(s: &Suite, corpus: &[Poset]) -> Check {
    for p in corpus {
        let inst = Some(p);
        let n = p.n();
        let w = canonicalize(p).map_err(|e| s.fail(e.to_string(), inst))?;
        s.ensure(
            w.verified && verify_witness(&w),
            || "witness not verified".into(),
            inst,
        )?;
        let m = n.saturating_sub(2);
        let bound = match w.target_kind {
            CanonicalTarget::OnePeak => 2 * m,
            CanonicalTarget::TwoPeak { .. } => (m / 2) * m.div_ceil(2),
        };
        s.ensure(
            w.multiplications_used <= bound,
            || format!("{} multiplications, bound {bound}", w.multiplications_used),
            inst,
        )?;
        // Pair against every canonical representative of the same size.
        let mut targets = vec![CanonicalTarget::OnePeak];
        if n >= 4 {
            targets.extend((n.div_ceil(2)..=n - 2).map(|p| CanonicalTarget::TwoPeak { p }));
        }
        let own = detect_type_a(p).map_err(|e| s.fail(e.to_string(), inst))?;
        for t in targets {
            let q = t.poset(n).map_err(|e| s.fail(e.to_string(), inst))?;
            let same_polynomial = spectral_report(&q, 1).coxeter_polynomial
                == spectral_report(p, 1).coxeter_polynomial;
            let outcome = pair_congruence(p, &q).map_err(|e| s.fail(e.to_string(), inst))?;
            let congruent = matches!(outcome, PairOutcome::Congruent(_));
            s.ensure(
                congruent == same_polynomial,
                || format!("pair decision {congruent} against {t:?} disagrees with Coxeter polynomials ({own:?})"),
                inst,
            )?;
        }
    }
    Ok(())
}

fn check_all_posets(s: &Suite, max_n: usize, allow_n8: bool) -> Check {
    for n in 1..=max_n {
        let all =
            oracle_enumerate_all_posets(n, allow_n8).map_err(|e| s.fail(e.to_string(), None))?;
        let target = IntPolynomial::geometric(n);
        for p in &all {
            let r = spectral_report(p, 1);
            let positive_type_a = p.is_connected()
                && r.nonnegative
                && r.corank == 0
                && matches!(detect_type_a(p), Ok(TypeAClass::Positive { .. }));
            s.ensure(
                (r.coxeter_polynomial == target) == positive_type_a,
                || {
                    format!(
                        "Coxeter polynomial {} but positive type A = {positive_type_a}",
                        r.coxeter_polynomial
                    )
                },
                Some(p),
            )?;
        }
    }
    Ok(())
}
