//! Acceptance run: one PASS/FAIL line per criterion, exact checks only.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use hullforge::demo::segment_gap;
use hullforge_core::boolalg::{complement_witness, principal_polar, vm_sm, RcSet};
use hullforge_core::curvetrace::{cover_gap, parabola_family, pi_y_term, Branch, Dir, Interval, IntervalSet, QuadReal, TraceElement};
use hullforge_core::freudenthal::{approximate, sup_error};
use hullforge_core::geometry::Domain;
use hullforge_core::hull::{
    component_product, essential_witness, hull_morphism, polar_split, HullElement, MorphismSpec,
};
use hullforge_core::plfun::PlFunction;
use hullforge_core::term::parse_term;
use hullforge_core::{gen, Q};

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn cubes() -> [Arc<Domain<Q>>; 2] {
    [Domain::unit_cube(1), Domain::unit_cube(2)]
}

fn freudenthal() -> Outcome {
    let [line, square] = cubes();
    let mut functions = Vec::new();
    for t in ["x1", "(2*x1 - 1) v 0", "x1 v (1 - x1)"] {
        functions.push(PlFunction::compile(&parse_term(t).unwrap(), &line).unwrap());
    }
    for t in ["x1 v x2", "abs(x1 - x2)"] {
        functions.push(PlFunction::compile(&parse_term(t).unwrap(), &square).unwrap());
    }
    let mut rng = gen::rng(1);
    for i in 0..50 {
        let x = if i % 2 == 0 { &line } else { &square };
        functions.push(gen::function(&mut rng, x, 4));
    }
    let mut worst = q(0, 1);
    for g in &functions {
        for n in [1, 2, 4, 8, 16] {
            let e = sup_error(g, &approximate(g, n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(e.value <= q(1, n), || format!("error {} > 1/{n} for {g}", e.value))?;
            worst = worst.max(e.value * q(n, 1));
        }
    }
    Ok(format!("{} functions x 5 levels; max n*error = {worst}", functions.len()))
}

fn round_trip() -> Outcome {
    let mut rng = gen::rng(2);
    for i in 0..200 {
        let x = &cubes()[i % 2];
        let e = gen::hull(&mut rng, x, 5).map_err(|e| e.to_string())?;
        let mut acc = HullElement::zero(x);
        for p in e.pieces() {
            let chi = HullElement::char_elem(&p.region);
            let term = component_product(&p.value, &chi).map_err(|e| e.to_string())?;
            acc = acc.add(&term).map_err(|e| e.to_string())?;
        }
        ensure(acc.equals(&e).unwrap(), || format!("round trip failed for {e}"))?;
    }
    Ok("200 elements rebuilt, 0 failures".into())
}

fn projectable() -> Outcome {
    let mut rng = gen::rng(3);
    for i in 0..200 {
        let x = &cubes()[i % 2];
        let e = gen::hull(&mut rng, x, 5).unwrap();
        let v = gen::hull(&mut rng, x, 5).unwrap();
        let s = polar_split(&e, &v).map_err(|e| e.to_string())?;
        ensure(s.verified(), || format!("split failed: e = {e}, v = {v}"))?;
    }
    let mut max_n = 0;
    for i in 0..100 {
        let x = &cubes()[i % 2];
        let e = gen::positive_hull(&mut rng, x, 4).unwrap();
        let w = essential_witness(&e).map_err(|e| e.to_string())?;
        let h = HullElement::embed(&w.h);
        let ok = w.verified && h.is_positive() && h.leq(&e.scale(w.n)).unwrap();
        ensure(ok, || format!("witness failed for {e}"))?;
        max_n = max_n.max(w.n);
    }
    let (mut embedded, mut pairs, mut decomps) = (0, 0, 0);
    for s in 0..5 {
        let x = &cubes()[s % 2];
        let spec = MorphismSpec::new(gen::rcset(&mut rng, x).arrangement().clone());
        let phi = |e: &HullElement<Q>| hull_morphism(&spec, e).unwrap();
        for _ in 0..10 {
            let g = gen::function(&mut rng, x, 4);
            ensure(phi(&HullElement::embed(&g)).equals(&HullElement::embed(&spec.iota(&g))).unwrap(), || {
                format!("phi(pi(g)) != iota(g) for {g}")
            })?;
            embedded += 1;
        }
        for _ in 0..20 {
            let e = gen::hull(&mut rng, x, 4).unwrap();
            let f = gen::hull(&mut rng, x, 4).unwrap();
            let ok = phi(&e.add(&f).unwrap()).equals(&phi(&e).add(&phi(&f)).unwrap()).unwrap()
                && phi(&e.join(&f).unwrap()).equals(&phi(&e).join(&phi(&f)).unwrap()).unwrap()
                && phi(&e.meet(&f).unwrap()).equals(&phi(&e).meet(&phi(&f)).unwrap()).unwrap();
            ensure(ok, || format!("phi is not a homomorphism on {e}, {f}"))?;
            pairs += 1;
        }
        for _ in 0..20 {
            let e = gen::hull(&mut rng, x, 4).unwrap();
            let cut = e.refine_by(&gen::partition(&mut rng, x)).unwrap();
            ensure(phi(&e).equals(&phi(&cut)).unwrap(), || format!("phi depends on decomposition of {e}"))?;
            decomps += 1;
        }
    }
    Ok(format!(
        "200 splits; 100 witnesses (max n = {max_n}); phi over 5 specs: {embedded} embeddings, {pairs} pairs, {decomps} decompositions"
    ))
}

fn boolean_laws(a: &RcSet<Q>, b: &RcSet<Q>, c: &RcSet<Q>) -> bool {
    let x = a.domain();
    let eq = |l: RcSet<Q>, r: RcSet<Q>| l.equals(&r).unwrap();
    eq(a.complement().complement(), a.clone())
        && eq(a.join(b).unwrap().complement(), a.complement().meet(&b.complement()).unwrap())
        && eq(a.meet(b).unwrap().complement(), a.complement().join(&b.complement()).unwrap())
        && eq(a.meet(&b.join(c).unwrap()).unwrap(), a.meet(b).unwrap().join(&a.meet(c).unwrap()).unwrap())
        && eq(a.join(&b.meet(c).unwrap()).unwrap(), a.join(b).unwrap().meet(&a.join(c).unwrap()).unwrap())
        && eq(a.join(&a.complement()).unwrap(), RcSet::full(x))
        && eq(a.meet(&a.complement()).unwrap(), RcSet::empty(x))
        && eq(a.meet(b).unwrap(), b.meet(a).unwrap())
        && eq(a.join(&a.meet(b).unwrap()).unwrap(), a.clone())
}

fn polars() -> Outcome {
    let mut rng = gen::rng(4);
    for i in 0..200 {
        let x = &cubes()[i % 2];
        let f = gen::nonnegative_function(&mut rng, x, 3);
        let g = gen::nonnegative_function(&mut rng, x, 3);
        let (pf, pg) = (principal_polar(&f), principal_polar(&g));
        let ok = principal_polar(&f.meet(&g).unwrap()).equals(&pf.meet(&pg).unwrap()).unwrap()
            && principal_polar(&f.join(&g).unwrap()).equals(&pf.join(&pg).unwrap()).unwrap();
        ensure(ok, || format!("polar identity fails for {f}, {g}"))?;
    }
    for i in 0..200 {
        let x = &cubes()[i % 2];
        let mut set = |k: usize| {
            if k.is_multiple_of(2) {
                gen::rcset(&mut rng, x)
            } else {
                principal_polar(&gen::function(&mut rng, x, 3))
            }
        };
        let (a, b, c) = (set(i), set(i + 1), set(i));
        ensure(boolean_laws(&a, &b, &c), || format!("Boolean law fails for {a}, {b}, {c}"))?;
    }
    Ok("200 polar pairs, 200 Boolean law suites".into())
}

fn complementedness() -> Outcome {
    let mut rng = gen::rng(5);
    for x in cubes() {
        for _ in 0..100 {
            let g = gen::function(&mut rng, &x, 4);
            let w = complement_witness(&g).map_err(|e| e.to_string())?;
            let (support_g, _) = vm_sm(&g);
            let (_, zero_w) = vm_sm(&w);
            ensure(zero_w.equals(&support_g).unwrap(), || format!("witness postcondition fails for {g}"))?;
        }
    }
    let full = "complemented: true; Z_G compact; w_G Z_G = Z_G";
    for n in 1..=32 {
        let gap = cover_gap(&parabola_family(n).unwrap()).unwrap();
        let exact = gap.par_plus.is_empty()
            && gap.par_minus.is_empty()
            && gap.seg_plus == segment_gap(n, false)
            && gap.seg_minus == segment_gap(n, true);
        ensure(exact, || {
            format!(
                "N = {n}: par+ {} par- {} seg+ {} seg- {}",
                gap.par_plus, gap.par_minus, gap.seg_plus, gap.seg_minus
            )
        })?;
    }
    let trace = "complemented: false; Z_G non-compact";
    Ok(format!(
        "full PL group on [0,1] and [0,1]^2, 200 witnesses: {full}; curve group, N = 1..32, gap seg+ = (0, 1/N), seg- = (0, 1/N]: {trace}"
    ))
}

fn vanishing() -> Outcome {
    let mut rng = gen::rng(6);
    let mut min_radius: Option<Q> = None;
    for _ in 0..100 {
        let t = gen::parabola_vanishing_term(&mut rng);
        let e = TraceElement::restrict(&t).map_err(|e| e.to_string())?;
        ensure(e.vanishes_on_parabola_germ(), || format!("{t} does not vanish on the parabola germ"))?;
        let r = e.segment_flat_radius();
        ensure(matches!(r, Some(ref r) if *r > q(0, 1)), || format!("{t} is not flat on the segment"))?;
        let r = r.unwrap();
        min_radius = Some(min_radius.map_or(r.clone(), |m| m.min(r)));
    }
    let y = TraceElement::restrict(&pi_y_term()).unwrap();
    let half_open = IntervalSet::single(Interval::new(QuadReal::zero(), true, QuadReal::one(), false));
    ensure(
        y.germ_support(Branch::Seg, Dir::Plus).is_empty() && y.germ_support(Branch::Seg, Dir::Minus).is_empty(),
        || "pi_y has segment germs".into(),
    )?;
    ensure(y.germ_support(Branch::Par, Dir::Plus) == half_open, || {
        format!("pi_y par+ support is {}", y.germ_support(Branch::Par, Dir::Plus))
    })?;
    Ok(format!(
        "100 vanishing traces flat on the segment (min radius {}); pi_y: seg = {{}}, par+ = [0, 1)",
        min_radius.unwrap()
    ))
}

fn determinism() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("sessions");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    ensure(!files.is_empty(), || "no shipped sessions".into())?;
    let run = |p: &Path| {
        Command::new(env!("CARGO_BIN_EXE_hullforge"))
            .arg("run")
            .arg(p)
            .arg("--format")
            .arg("json")
            .output()
            .expect("binary runs")
    };
    for f in &files {
        let (a, b) = (run(f), run(f));
        ensure(!a.stdout.is_empty(), || format!("{} produced no report", f.display()))?;
        ensure(a.stdout == b.stdout && a.status.code() == b.status.code(), || {
            format!("{} differs between runs", f.display())
        })?;
    }
    Ok(format!("{} sessions byte-identical across two runs", files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 freudenthal certificates", freudenthal),
        ("2 decomposition round trip", round_trip),
        ("3 projectable hull package", projectable),
        ("4 polar and Boolean identities", polars),
        ("5 complementedness", complementedness),
        ("6 vanishing implication", vanishing),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why}) [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
