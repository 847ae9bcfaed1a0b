//! Randomised and exhaustive invariant suites for the arithmetic layers.

use num_bigint::BigInt;
use serde_json::json;

use super::{random_element, random_word, rng_for, Check, EXHAUSTIVE_LIMIT};
use crate::collect::collect;
use crate::nil2::Nil2Element;
use crate::quotient::{intersection_pairing, Enumeration, ModKElement, QuotientSpec};
use crate::twist::{is_well_defined, twist_table, InducedAction, TwistName};
use crate::word::{SurfaceContext, Word};

fn params(ctx: &SurfaceContext) -> serde_json::Value {
    json!({ "genus": ctx.genus() })
}

/// The relator evaluates to the identity, both through the closed-form law
/// (with the relator correction scaled by `correction_sign`) and through the
/// reference collector.
pub fn suite_relator(ctx: &SurfaceContext, correction_sign: i32) -> Vec<Check> {
    let r = ctx.relator();
    let law = Nil2Element::evaluate_with(ctx, &r, correction_sign);
    let oracle = collect(ctx, &r).map(|e| e.is_identity());
    vec![Check::verdict(
        format!("nil2.relator.g{}", ctx.genus()),
        "the surface relator is trivial in the class-2 quotient",
        params(ctx),
        law.is_identity() && oracle == Ok(true),
        json!({ "law": law.to_json(), "oracle_identity": oracle.ok(), "coverage": "exhaustive" }),
    )]
}

/// Associativity, two-sided identity and inverses on random triples.
pub fn suite_group_axioms(ctx: &SurfaceContext, triples: usize, seed: u64) -> Vec<Check> {
    let id = format!("nil2.axioms.g{}", ctx.genus());
    let mut rng = rng_for(seed, &id);
    let e = Nil2Element::identity(ctx);
    let mut bad = None;
    for t in 0..triples {
        let a = random_element(&mut rng, ctx, 50);
        let b = random_element(&mut rng, ctx, 50);
        let c = random_element(&mut rng, ctx, 50);
        let ok = &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &e == a
            && &e * &a == a
            && (&a * &a.inverse()).is_identity()
            && (&a.inverse() * &a).is_identity();
        if !ok {
            bad = Some(json!({ "trial": t, "a": a.to_json(), "b": b.to_json(), "c": c.to_json() }));
            break;
        }
    }
    vec![Check::verdict(
        id,
        "the normal-form law is a group law on the class-2 quotient",
        json!({ "genus": ctx.genus(), "triples": triples, "seed": seed }),
        bad.is_none(),
        json!({ "coverage": "sampled", "counterexample": bad }),
    )]
}

/// Closed-form products against the reference collector.
pub fn suite_oracle(ctx: &SurfaceContext, pairs: usize, seed: u64) -> Vec<Check> {
    let id = format!("nil2.oracle.g{}", ctx.genus());
    let mut rng = rng_for(seed, &id);
    let mut bad = None;
    for t in 0..pairs {
        let u = random_word(&mut rng, ctx, 16);
        let v = random_word(&mut rng, ctx, 16);
        let law = (|| {
            let a = Nil2Element::evaluate(ctx, &u)?;
            let b = Nil2Element::evaluate(ctx, &v)?;
            Ok::<_, crate::Error>((a.multiply(&b)?, a))
        })();
        let oracle = collect(ctx, &u.concat(&v)).and_then(|p| Ok((p, collect(ctx, &u)?)));
        let ok = matches!((&law, &oracle), (Ok(l), Ok(o)) if l == o);
        if !ok {
            bad = Some(json!({ "trial": t, "u": u.to_string(), "v": v.to_string() }));
            break;
        }
    }
    vec![Check::verdict(
        id,
        "the closed-form multiplication agrees with letter-by-letter collection",
        json!({ "genus": ctx.genus(), "pairs": pairs, "seed": seed }),
        bad.is_none(),
        json!({ "coverage": "sampled", "counterexample": bad }),
    )]
}

/// Closed-form powers against repeated multiplication, `|p| <= 8`.
pub fn suite_power_law(ctx: &SurfaceContext, count: usize, seed: u64) -> Vec<Check> {
    let id = format!("nil2.powers.g{}", ctx.genus());
    let mut rng = rng_for(seed, &id);
    let mut bad = None;
    'outer: for t in 0..count {
        let a = random_element(&mut rng, ctx, 30);
        let step = a.inverse();
        let mut up = Nil2Element::identity(ctx);
        let mut down = Nil2Element::identity(ctx);
        for p in 0..=8i64 {
            if a.pow(p) != up || a.pow(-p) != down {
                bad = Some(json!({ "trial": t, "p": p, "a": a.to_json() }));
                break 'outer;
            }
            up = &up * &a;
            down = &down * &step;
        }
    }
    vec![Check::verdict(
        id,
        "the closed-form power agrees with repeated multiplication",
        json!({ "genus": ctx.genus(), "elements": count, "seed": seed }),
        bad.is_none(),
        json!({ "coverage": "sampled", "counterexample": bad }),
    )]
}

/// Centrality of commutators, commutator classes of words, and the
/// congruence `[x_{2i-1}^k, x_{2i}] = [x_{2i-1}, x_{2i}]^k`.
pub fn suite_commutator_calculus(ctx: &SurfaceContext, count: usize, seed: u64) -> Vec<Check> {
    let g = ctx.genus();
    let id = format!("nil2.commutators.g{g}");
    let mut rng = rng_for(seed, &id);
    let mut bad = None;
    for t in 0..count {
        let a = random_element(&mut rng, ctx, 30);
        let mut c = random_element(&mut rng, ctx, 30);
        c = Nil2Element::from_commutators(ctx, c.m().to_vec()).expect("shape");
        let u = random_word(&mut rng, ctx, 10);
        let v = random_word(&mut rng, ctx, 10);
        let class = Nil2Element::evaluate(ctx, &u)
            .and_then(|a| a.commutator_class(&Nil2Element::evaluate(ctx, &v)?));
        let direct = Nil2Element::evaluate(ctx, &Word::commutator(&u, &v));
        // The [x1,x2] content of a commutator is the intersection form mod g.
        let nu = Nil2Element::evaluate(ctx, &u).expect("in range");
        let nv = Nil2Element::evaluate(ctx, &v).expect("in range");
        let omega: BigInt = (1..=g)
            .map(|h| nu.n_at(2 * h - 1) * nv.n_at(2 * h) - nu.n_at(2 * h) * nv.n_at(2 * h - 1))
            .sum();
        let omega = ((omega % g as i64) + g as i64) % g as i64;
        let pairing = direct.as_ref().ok().and_then(|d| intersection_pairing(d).ok());
        let ok = &a * &c == &c * &a
            && matches!((&class, &direct), (Ok(x), Ok(y)) if x == y)
            && direct.as_ref().is_ok_and(|d| d.is_commutator())
            && pairing.map(BigInt::from) == Some(omega);
        if !ok {
            bad = Some(json!({ "trial": t, "u": u.to_string(), "v": v.to_string() }));
            break;
        }
    }
    let mut checks = vec![Check::verdict(
        id,
        "commutators are central, bilinear in the abelianisation, and pair by the intersection form",
        json!({ "genus": g, "trials": count, "seed": seed }),
        bad.is_none(),
        json!({ "coverage": "sampled", "counterexample": bad }),
    )];

    let mut failures = Vec::new();
    for i in 1..=g {
        let x = Word::generator(2 * i - 1);
        let y = Word::generator(2 * i);
        let base = Nil2Element::evaluate(ctx, &Word::commutator(&x, &y)).expect("in range");
        for k in 1..=8i64 {
            let lhs = Nil2Element::evaluate(ctx, &Word::commutator(&x.pow(k), &y)).expect("in range");
            if lhs != base.pow(k) {
                failures.push(json!({ "i": i, "k": k }));
            }
        }
    }
    checks.push(Check::verdict(
        format!("nil2.power-commutator.g{g}"),
        "[x_(2i-1)^k, x_(2i)] equals [x_(2i-1), x_(2i)]^k modulo the third lower central term",
        json!({ "genus": g, "k": "1..=8" }),
        failures.is_empty(),
        json!({ "coverage": "exhaustive", "failures": failures }),
    ));
    checks
}

/// Every twist table respects the relator.
pub fn suite_well_defined(ctx: &SurfaceContext) -> Vec<Check> {
    let names = TwistName::all(ctx);
    let mut failing = Vec::new();
    for &name in &names {
        let ok = twist_table(name, ctx).and_then(|t| is_well_defined(&t, ctx));
        if ok != Ok(true) {
            failing.push(name.to_string());
        }
    }
    vec![Check::verdict(
        format!("twist.well-defined.g{}", ctx.genus()),
        "each twist substitution preserves the surface relator",
        params(ctx),
        failing.is_empty(),
        json!({
            "twists": names.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
            "count": names.len(),
            "failing": failing,
            "coverage": "exhaustive",
        }),
    )]
}

/// The induced action on normal forms agrees with substituting into words.
pub fn suite_induced_action(ctx: &SurfaceContext, words: usize, seed: u64) -> Vec<Check> {
    let id = format!("twist.induced.g{}", ctx.genus());
    let mut rng = rng_for(seed, &id);
    let mut bad = None;
    'outer: for name in TwistName::all(ctx) {
        let (table, action) = match twist_table(name, ctx)
            .and_then(|t| Ok((t.clone(), InducedAction::new(ctx, &t)?)))
        {
            Ok(v) => v,
            Err(err) => {
                bad = Some(json!({ "twist": name.to_string(), "error": err.to_string() }));
                break;
            }
        };
        for _ in 0..words {
            let w = random_word(&mut rng, ctx, 14);
            let via_action = Nil2Element::evaluate(ctx, &w).and_then(|a| action.apply(&a));
            let via_word = Nil2Element::evaluate(ctx, &w.substitute(&table));
            if !matches!((&via_action, &via_word), (Ok(x), Ok(y)) if x == y) {
                bad = Some(json!({ "twist": name.to_string(), "word": w.to_string() }));
                break 'outer;
            }
        }
    }
    vec![Check::verdict(
        id,
        "the action of a twist on normal forms matches substitution into words",
        json!({ "genus": ctx.genus(), "words_per_twist": words, "seed": seed }),
        bad.is_none(),
        json!({ "coverage": "sampled", "counterexample": bad }),
    )]
}

/// Projections to `π/K` and `π/π^e K` are homomorphisms.
pub fn suite_projection(ctx: &SurfaceContext, count: usize, seed: u64) -> Vec<Check> {
    let g = ctx.genus();
    let id = format!("quotient.projection.g{g}");
    let mut rng = rng_for(seed, &id);
    let specs = [QuotientSpec::new(ctx, g).unwrap(), QuotientSpec::new(ctx, 2 * g).unwrap()];
    let mut bad = None;
    for t in 0..count {
        let a = random_element(&mut rng, ctx, 40);
        let b = random_element(&mut rng, ctx, 40);
        let ab = &a * &b;
        let (pa, pb) = (ModKElement::project(&a), ModKElement::project(&b));
        let mut ok = pa.multiply(&pb).ok() == Some(ModKElement::project(&ab));
        for spec in &specs {
            let lhs = spec.project(&ab).unwrap();
            let rhs = &spec.project(&a).unwrap() * &spec.project(&b).unwrap();
            ok &= lhs == rhs && spec.project_mod_k(&pa).unwrap() == spec.project(&a).unwrap();
        }
        if !ok {
            bad = Some(json!({ "trial": t, "a": a.to_json(), "b": b.to_json() }));
            break;
        }
    }
    vec![Check::verdict(
        id,
        "projection to pi/K and pi/pi^e K is a homomorphism and the projections commute",
        json!({ "genus": g, "pairs": count, "seed": seed }),
        bad.is_none(),
        json!({ "coverage": "sampled", "counterexample": bad }),
    )]
}

fn spec_params(spec: &QuotientSpec) -> serde_json::Value {
    json!({ "genus": spec.genus(), "exponent": spec.exponent(), "d": spec.m_modulus() })
}

fn spec_tag(spec: &QuotientSpec) -> String {
    format!("g{}.e{}", spec.genus(), spec.exponent())
}

/// Group axioms in `π/π^e K`: exhaustive over all triples up to order 512,
/// over all pairs and generators up to [`EXHAUSTIVE_LIMIT`], sampled beyond.
pub fn suite_quotient_axioms(spec: &QuotientSpec, samples: usize, seed: u64, guard: u64) -> Vec<Check> {
    let id = format!("quotient.axioms.{}", spec_tag(spec));
    let anchor = "the finite quotient law is a group law";
    let order = spec.order();
    let small = order <= BigInt::from(EXHAUSTIVE_LIMIT) && order <= BigInt::from(guard);
    if !small {
        let mut rng = rng_for(seed, &id);
        let mut ok = true;
        for _ in 0..samples {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                spec.project(&random_element(rng, &spec.ctx(), 1_000)).unwrap()
            };
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            ok &= &(&a * &b) * &c == &a * &(&b * &c)
                && (&a * &a.inverse()).is_identity()
                && &a * &spec.identity() == a;
        }
        return vec![Check::verdict(
            id,
            anchor,
            spec_params(spec),
            ok,
            json!({ "coverage": "sampled", "triples": samples, "seed": seed }),
        )];
    }
    let size: usize = order.try_into().expect("small order");
    let elems: Vec<_> = (0..size).map(|k| spec.decode(k)).collect();
    let mut table = vec![0u32; size * size];
    for (a, x) in elems.iter().enumerate() {
        for (b, y) in elems.iter().enumerate() {
            table[a * size + b] = spec.encode(&(x * y)) as u32;
        }
    }
    let mul = |a: usize, b: usize| table[a * size + b] as usize;
    let id_code = spec.encode(&spec.identity());
    let mut ok = (0..size).all(|a| {
        let inv = spec.encode(&elems[a].inverse());
        mul(a, id_code) == a && mul(id_code, a) == a && mul(a, inv) == id_code && mul(inv, a) == id_code
    });
    let full = size <= 512;
    if full {
        for a in 0..size {
            for b in 0..size {
                let ab = mul(a, b);
                for c in 0..size {
                    ok &= mul(ab, c) == mul(a, mul(b, c));
                }
            }
        }
    } else {
        // Associativity on all (a, b, s) with s a generator forces it everywhere.
        let gens: Vec<usize> = spec.generators().iter().map(|s| spec.encode(s)).collect();
        for a in 0..size {
            for b in 0..size {
                let ab = mul(a, b);
                for &s in &gens {
                    ok &= mul(ab, s) == mul(a, mul(b, s));
                }
            }
        }
    }
    vec![Check::verdict(
        id,
        anchor,
        spec_params(spec),
        ok,
        json!({
            "coverage": "exhaustive",
            "products": size * size,
            "associativity": if full { "all triples" } else { "all pairs times generators" },
        }),
    )]
}

/// `q^e = 1` for every element (exhaustive when enumerable).
pub fn suite_exponent(spec: &QuotientSpec, samples: usize, seed: u64, guard: u64) -> Vec<Check> {
    let id = format!("quotient.exponent.{}", spec_tag(spec));
    let e = spec.exponent() as i64;
    let (ok, coverage, checked) = match Enumeration::new(spec, guard) {
        Ok(all) => (
            all.elements().iter().all(|q| q.pow(e).is_identity()),
            "exhaustive",
            all.len(),
        ),
        Err(_) => {
            let mut rng = rng_for(seed, &id);
            let ok = (0..samples).all(|_| {
                let a = random_element(&mut rng, &spec.ctx(), 1_000);
                spec.project(&a).unwrap().pow(e).is_identity()
            });
            (ok, "sampled", samples)
        }
    };
    vec![Check::verdict(
        id,
        "every element of pi/pi^e K has order dividing e",
        spec_params(spec),
        ok,
        json!({ "coverage": coverage, "elements": checked }),
    )]
}
