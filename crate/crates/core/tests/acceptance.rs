//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hanoi_core::contraction::{
    check_contraction, check_star, find_witness, prenucleus, verify_witness, DEFAULT_CAP,
};
use hanoi_core::fractal::dims::{
    hausdorff_dimension, spectral_dimension, spectral_dimension_bisection,
};
use hanoi_core::fractal::energy::{
    cell_diameter_scaling, effective_resistance, renormalization_factor, renormalize, to_f64,
};
use hanoi_core::fractal::geometry::{build_ifs, build_simplex, verify_cell_intersections};
use hanoi_core::hanoi::{
    family_s, five_peg_rotational, hanoi_c, hanoi_towers, six_peg_dihedral, symmetry_closure,
    Symmetry,
};
use hanoi_core::networks::minor::{check_minor, distortion_report, verify_isomorphism};
use hanoi_core::notation::parse_system;
use hanoi_core::schreier::{root_transitivity, schreier, DEFAULT_VERTEX_BOUND};
use hanoi_core::{GeneratorSet, HanoiGenerator, Permutation, TreeAutomorphism, Word};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn criterion(number: usize, limit: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
        Err(d) => (false, d),
    };
    println!(
        "criterion {number:2}: {}  [{elapsed:.2?}] {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hanoi_three_nucleus() -> Outcome {
    let set = hanoi_towers(3).map_err(|e| e.to_string())?;
    let report = check_contraction(&set, 4);
    ensure(report.contracting, || {
        "Hanoi(3) reported non-contracting".into()
    })?;
    let nucleus = prenucleus(&set, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut expected: BTreeSet<TreeAutomorphism> = set
        .generators()
        .iter()
        .map(|g| g.automorphism.clone())
        .collect();
    expected.insert(TreeAutomorphism::identity(3));
    ensure(nucleus.automorphisms() == expected, || {
        format!(
            "nucleus has {} elements, not {{1, a01, a02, a12}}",
            nucleus.len()
        )
    })?;
    Ok("contracting; nucleus = {1, a01, a02, a12}".into())
}

fn non_contraction() -> Outcome {
    let mut notes = Vec::new();
    for k in [4, 5] {
        let set = hanoi_towers(k).map_err(|e| e.to_string())?;
        let report = check_contraction(&set, 2);
        ensure(!report.contracting, || {
            format!("Hanoi({k}) reported contracting")
        })?;
        let a = &set.get("a01").ok_or("a01 missing")?.automorphism;
        let b = &set.get("a12").ok_or("a12 missing")?.automorphism;
        let ab = a.compose(b).map_err(|e| e.to_string())?;
        ensure(verify_witness(&ab, 3, 0, 1), || {
            format!("k={k}: (a01 a12)^3|_0 = a01 a12 with i = 3 fails")
        })?;
        let cube = ab.pow(3);
        ensure(cube.section(3).unwrap() == cube, || {
            format!("k={k}: (ab)^3|_3 != (ab)^3")
        })?;
        let found = report
            .witness
            .ok_or_else(|| format!("k={k}: no witness found"))?;
        ensure(found.verify(), || format!("k={k}: found witness fails"))?;
        notes.push(format!(
            "k={k}: a01*a12 verified at i=3, j=0; search found {}",
            found.name()
        ));
    }
    Ok(notes.join("; "))
}

fn hc_nucleus() -> Outcome {
    let mut sizes = Vec::new();
    let mut failures = Vec::new();
    for k in 3..=6usize {
        let set = hanoi_c(k).map_err(|e| e.to_string())?;
        ensure(check_star(&set).is_none(), || {
            format!("Hc({k}) fails the orbit condition")
        })?;
        let nucleus = prenucleus(&set, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let mut expected: BTreeSet<TreeAutomorphism> = family_s(k, 1)
            .map_err(|e| e.to_string())?
            .generators()
            .iter()
            .map(|g| g.automorphism.clone())
            .collect();
        expected.insert(TreeAutomorphism::identity(k));
        if nucleus.automorphisms() != expected {
            failures.push(format!(
                "k={k}: nucleus differs from S({k},1) plus identity"
            ));
        }
        let formula = k * ((1..k).product::<usize>() - 1) + 1;
        if nucleus.len() != formula {
            failures.push(format!(
                "k={k}: size {} vs formula {formula}",
                nucleus.len()
            ));
        }
        sizes.push(nucleus.len());
    }
    let listed = [4, 21, 121, 721];
    for (k, (&got, &want)) in (3..).zip(sizes.iter().zip(&listed)) {
        if got != want {
            failures.push(format!("k={k}: size {got}, listed {want}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("sizes {sizes:?}"))
    } else {
        Err(format!("sizes {sizes:?}; {}", failures.join("; ")))
    }
}

fn two_inactive_closures(k: usize) -> Vec<GeneratorSet> {
    let mut out = Vec::new();
    for perm in Permutation::all(k) {
        // inactive pegs {k−2, k−1}; σ acts on the rest
        if perm.is_identity() || !perm.fixes(k as u8 - 1) || !perm.fixes(k as u8 - 2) {
            continue;
        }
        let g = HanoiGenerator::new(k, &[k as u8 - 2, k as u8 - 1], perm).unwrap();
        let set = GeneratorSet::from_generators(k, vec![g]).unwrap();
        out.push(symmetry_closure(&set, Symmetry::Full));
    }
    out
}

fn symmetric_examples() -> Outcome {
    ensure(check_star(&five_peg_rotational()).is_none(), || {
        "5-peg rotational set fails the orbit condition".into()
    })?;
    ensure(check_star(&six_peg_dihedral()).is_none(), || {
        "6-peg dihedral set fails the orbit condition".into()
    })?;
    let mut checked = 0;
    for k in [4, 5] {
        for set in two_inactive_closures(k) {
            let violation = check_star(&set)
                .ok_or_else(|| format!("k={k}: full closure of size {} passes", set.size()))?;
            let witness = find_witness(&set, 2)
                .ok_or_else(|| format!("k={k}: no witness for {violation}"))?;
            ensure(witness.verify(), || format!("k={k}: witness fails"))?;
            checked += 1;
        }
    }
    Ok(format!(
        "rotational and dihedral sets pass; {checked} full closures fail with witnesses"
    ))
}

fn renormalization() -> Outcome {
    for k in 3..=8usize {
        let hs = renormalize(k).map_err(|e| format!("k={k}: {e}"))?;
        let constant = (k * k - k - 1) as f64 / (k * (k - 2)) as f64;
        ensure(hs.residual <= 1e-10, || {
            format!("k={k}: residual {:e}", hs.residual)
        })?;
        ensure((hs.lambda_raw_numeric - constant).abs() <= 1e-10, || {
            format!("k={k}: constant {}", hs.lambda_raw_numeric)
        })?;
        let kk = k as i128;
        ensure(hs.r == Ratio::new(kk * (kk - 2), kk * kk - kk - 1), || {
            format!("k={k}: r = {}", hs.r)
        })?;
    }
    Ok(format!(
        "k = 3..8; r(3) = {}, r(8) = {}",
        renormalization_factor(3),
        renormalization_factor(8)
    ))
}

fn dimensions() -> Outcome {
    let dh = hausdorff_dimension(3).map_err(|e| e.to_string())?;
    let ds = spectral_dimension(3).map_err(|e| e.to_string())?;
    let dh_ref = 3f64.ln() / (5f64 / 3.0).ln();
    let ds_ref = 2.0 * 3f64.ln() / 5f64.ln();
    ensure((dh - dh_ref).abs() <= 1e-12, || format!("d_H(3) = {dh}"))?;
    ensure((ds - ds_ref).abs() <= 1e-12, || format!("d_S(3) = {ds}"))?;
    for k in 3..=8 {
        let a = spectral_dimension(k).map_err(|e| e.to_string())?;
        let b = spectral_dimension_bisection(k, 1e-14).map_err(|e| e.to_string())?;
        ensure((a - b).abs() <= 1e-10, || {
            format!("k={k}: closed {a}, bisection {b}")
        })?;
    }
    Ok(format!("d_H(3) = {dh:.12}, d_S(3) = {ds:.12}"))
}

fn resistance() -> Outcome {
    let hs = renormalize(3).map_err(|e| e.to_string())?;
    let r0 = effective_resistance(&hs, 0, 0, 1).map_err(|e| e.to_string())?;
    for m in 1..=3 {
        let r = effective_resistance(&hs, m, 0, 1).map_err(|e| e.to_string())?;
        ensure((r - r0).abs() <= 1e-9, || {
            format!("m={m}: R = {r}, m=0 gives {r0}")
        })?;
    }
    for m in 0..=3 {
        let values: Vec<f64> = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(x, y)| effective_resistance(&hs, m, x, y).unwrap())
            .collect();
        ensure(
            values.iter().all(|v| (v - values[0]).abs() <= 1e-10),
            || format!("m={m}: boundary resistances {values:?}"),
        )?;
    }
    let rows = cell_diameter_scaling(&hs, 4).map_err(|e| e.to_string())?;
    let last = rows.last().and_then(|r| r.ratio).ok_or("no ratio")?;
    let r = to_f64(hs.r);
    ensure((last - r).abs() / r <= 0.05, || {
        format!("diameter ratio {last} at m=4")
    })?;
    Ok(format!(
        "R(p0,p1) = {r0:.12} for m = 0..3; diameter ratio at m=4 = {last:.6}"
    ))
}

fn pcf_structure() -> Outcome {
    for k in 3..=5 {
        let ifs =
            build_ifs(&build_simplex(k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let report = verify_cell_intersections(&ifs, 2).map_err(|e| e.to_string())?;
        ensure(report.ok, || format!("k={k}: {:?}", report.pairs))?;
        ensure(report.post_critical.len() == k, || {
            format!("k={k}: post-critical {:?}", report.post_critical)
        })?;
        ensure(
            report.pairs.iter().all(|p| p.2.len() == k - 2 && p.3 == 0),
            || format!("k={k}: pair sizes {:?}", report.pairs),
        )?;
    }
    Ok("k = 3, 4, 5 at m = 2".into())
}

fn network_correspondence() -> Outcome {
    for n in 1..=8 {
        let report = verify_isomorphism(n).map_err(|e| e.to_string())?;
        ensure(
            report.constructive && report.oracle && report.degree_sequences_equal,
            || {
                format!(
                    "n={n}: constructive {}, oracle {}",
                    report.constructive, report.oracle
                )
            },
        )?;
    }
    for n in 1..=6 {
        let check = check_minor(n).map_err(|e| e.to_string())?;
        ensure(check.is_minor() && check.sizes, || {
            format!("n={n}: {check:?}")
        })?;
    }
    let mut last = String::new();
    for n in 2..=8 {
        let d = distortion_report(n).map_err(|e| e.to_string())?;
        ensure(d.min_ratio < d.bound(), || {
            format!("n={n}: min ratio {} not below {}", d.min_ratio, d.bound())
        })?;
        last = format!(
            "min ratio at n={n}: {:.3e} < {:.3e}",
            d.min_ratio,
            d.bound()
        );
    }
    Ok(format!("isomorphism n = 1..8, minor n = 1..6, {last}"))
}

fn random_word_element(rng: &mut ChaCha8Rng, k: usize) -> (Vec<HanoiGenerator>, TreeAutomorphism) {
    let len = rng.gen_range(1..=6);
    let gens: Vec<HanoiGenerator> = (0..len)
        .map(|_| {
            let g = common::random_generator(rng, k);
            if rng.gen_bool(0.5) {
                common::inverse(&g)
            } else {
                g
            }
        })
        .collect();
    let autos: Vec<TreeAutomorphism> = gens.iter().map(HanoiGenerator::to_automorphism).collect();
    (gens, common::product(k, &autos))
}

fn algebra_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..1000 {
        let k = rng.gen_range(3..=6);
        let (_, g) = random_word_element(&mut rng, k);
        let x = rng.gen_range(0..k) as u8;
        let len = rng.gen_range(0..=6);
        let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..k) as u8).collect();
        let mut xw = vec![x];
        xw.extend(&w);
        let lhs = g.act(&Word::new(xw)).map_err(|e| e.to_string())?;
        let mut rhs = vec![g.root_perm().apply(x)];
        rhs.extend(
            g.section(x as usize)
                .unwrap()
                .act(&Word::new(w))
                .unwrap()
                .letters(),
        );
        ensure(lhs.letters() == rhs.as_slice(), || {
            format!("wreath law, case {case}")
        })?;
    }
    for case in 0..1000 {
        let k = rng.gen_range(3..=6);
        let (gens, g) = random_word_element(&mut rng, k);
        let autos: Vec<TreeAutomorphism> =
            gens.iter().map(HanoiGenerator::to_automorphism).collect();
        let j = rng.gen_range(0..k);
        let (factors, _) =
            TreeAutomorphism::section_product(&autos, j).map_err(|e| e.to_string())?;
        ensure(
            common::product(k, &factors) == g.section(j).unwrap(),
            || format!("section product law, case {case}"),
        )?;
    }
    for case in 0..1000 {
        let k = rng.gen_range(3..=6);
        let (gens, g) = random_word_element(&mut rng, k);
        if g.is_identity() {
            continue;
        }
        let essential = gens.iter().fold(u64::MAX, |acc, s| acc & s.inactive_set());
        let autos: Vec<TreeAutomorphism> =
            gens.iter().map(HanoiGenerator::to_automorphism).collect();
        for j in 0..k {
            if essential >> j & 1 == 1 {
                ensure(g.section(j).unwrap() == g, || {
                    format!("essential section, case {case}")
                })?;
            } else {
                let (factors, _) = TreeAutomorphism::section_product(&autos, j).unwrap();
                let kept = factors.iter().filter(|f| !f.is_identity()).count();
                ensure(kept < gens.len(), || format!("section length, case {case}"))?;
            }
        }
    }
    let sys = parse_system("a = (0 1 2)(1, 1, 1, b); b = (0 2 1)(1, 1, 1, a)")
        .map_err(|e| e.to_string())?;
    let (a, b) = (&sys["a"], &sys["b"]);
    ensure(
        a.compose(b).unwrap().is_identity() && b.compose(a).unwrap().is_identity(),
        || "a b != 1".into(),
    )?;
    let ab = a.compose(b).unwrap();
    for n in 0..=6 {
        for w in Word::all(4, n) {
            ensure(ab.act(&w).unwrap() == w, || format!("a b moves {w}"))?;
        }
    }
    Ok("wreath law, section products, essential-set sections: 1000 cases each; a b = 1".into())
}

fn connectivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut connected = 0;
    for case in 0..20 {
        let k = rng.gen_range(3..=5);
        let count = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=3);
        let set = common::random_set_nonempty_inactive(&mut rng, k, count);
        let graph = schreier(&set, n, DEFAULT_VERTEX_BOUND).map_err(|e| e.to_string())?;
        let (transitive, _) = root_transitivity(&set);
        ensure(graph.is_connected() == transitive, || {
            format!(
                "case {case}: k={k}, n={n}, connected {}, transitive {transitive}",
                graph.is_connected()
            )
        })?;
        connected += usize::from(transitive);
    }
    Ok(format!("20 random sets agree ({connected} connected)"))
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, s(1), hanoi_three_nucleus),
        criterion(2, s(5), non_contraction),
        criterion(3, s(30), hc_nucleus),
        criterion(4, s(10), symmetric_examples),
        criterion(5, s(1), renormalization),
        criterion(6, s(1), dimensions),
        criterion(7, s(60), resistance),
        criterion(8, s(30), pcf_structure),
        criterion(9, s(60), network_correspondence),
        criterion(10, s(60), algebra_suite),
        criterion(11, s(30), connectivity),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!(
        "{} of {} criteria pass",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
