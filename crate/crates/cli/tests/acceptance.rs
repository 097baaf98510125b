//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints one PASS/FAIL line; exits nonzero if any fails.

use std::time::{Duration, Instant};

use campana_cli::commands::curves::{finite_difference_error, FD_TOLERANCE};
use campana_cli::{expected_dimension, run, toric_expected_dimension, Cli};
use campana_core::campana::generate_campana_contacts;
use campana_core::curve::{
    b_zero, jacobian_rank, normalized_markings, seeded_markings, separability_rank,
    two_point_solve, ExponentMatrix, SolveMode, TwoPointSolution,
};
use campana_core::field::{int, rational};
use campana_core::lattice::has_char_torsion;
use campana_core::p1::{
    composed_log_normal_degree, cyclic_cover, dihedral_cover, icosahedral_cover, klein_forms,
    klt_fano_check, log_normal_degree, riemann_hurwitz, Syzygy,
};
use campana_core::poly::PolyRing;
use campana_core::{
    build_curve, evaluate, projective_space_fan, quotient_torsion, smith_normal_form,
    sublattice_rank, verify_tangency, CampanaStructure, Characteristic, ContactCollection,
    IntegerMatrix, LatticeVector, Multiplicity, Rationals,
};
use clap::Parser;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock budget for the whole `P^2` pipeline.
const PIPELINE_BUDGET: Duration = Duration::from_secs(1);
/// Number of random float points for the finite-difference comparison.
const FD_POINTS: usize = 10;
/// Random matrices in the Smith normal form property run.
const SNF_SAMPLES: usize = 1000;
const SEED: u64 = 20240611;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ch(p: i64) -> Characteristic {
    Characteristic::new(p).expect("prime")
}

fn p2_collection(degree: u64, p: Characteristic) -> Result<ContactCollection, String> {
    let fan = projective_space_fan(2).map_err(|e| e.to_string())?;
    let structure =
        CampanaStructure::uniform(&fan, Multiplicity::Finite(2)).map_err(|e| e.to_string())?;
    generate_campana_contacts(&fan, &structure, &[degree; 3], p).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let fan = projective_space_fan(2).map_err(|e| e.to_string())?;
    let contacts = p2_collection(6, Characteristic::ZERO)?;
    ensure(contacts.len() == 6, format!("{} markings", contacts.len()))?;
    ensure(contacts.check_balancing(), "not balanced")?;
    let structure =
        CampanaStructure::uniform(&fan, Multiplicity::Finite(2)).map_err(|e| e.to_string())?;
    let campana =
        campana_core::campana::is_campana_type(&contacts, &structure).map_err(|e| e.to_string())?;
    ensure(campana.is_campana_type(), "not Campana type")?;
    let points = contacts.points();
    let rank = sublattice_rank(&points, 2).map_err(|e| e.to_string())?;
    ensure(rank == 2, format!("rank {rank}"))?;
    let torsion = quotient_torsion(&points, 2).map_err(|e| e.to_string())?;
    ensure(
        !has_char_torsion(&torsion, Characteristic::ZERO),
        "char torsion",
    )?;
    let table = contacts.coefficient_table();
    let s = seeded_markings(SEED, table.len(), Characteristic::ZERO);
    let x = seeded_markings(SEED + 1, 3, Characteristic::ZERO);
    let curve = build_curve(2, &normalized_markings(&s), &table, &x).map_err(|e| e.to_string())?;
    ensure(curve.beta == 6, format!("degree {}", curve.beta))?;
    let cert =
        verify_tangency(&curve, Some(structure.multiplicities())).map_err(|e| e.to_string())?;
    ensure(cert.table == table, "tangency table differs")?;
    let elapsed = start.elapsed();
    ensure(elapsed < PIPELINE_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!(
        "6 markings, degree 6, tangency exact, {:.1} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn criterion_2() -> Check {
    let table = p2_collection(6, Characteristic::ZERO)?.coefficient_table();
    let m = seeded_markings(SEED, table.len(), Characteristic::ZERO);
    let lam = seeded_markings(SEED + 1, 3, Characteristic::ZERO);
    let jac =
        jacobian_rank(2, &table, &m, &lam, Characteristic::ZERO).map_err(|e| e.to_string())?;
    ensure(jac.rank == 4, format!("rank {}", jac.rank))?;
    ensure(
        jac.lambda_block_identity,
        "scalar block is not the identity",
    )?;
    let a = ExponentMatrix::from_contacts(2, &table).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..FD_POINTS {
        let lam: Vec<f64> = (0..2).map(|_| rng.gen_range(0.5..2.0)).collect();
        let m: Vec<f64> = (0..a.n())
            .map(|_| {
                let v: f64 = rng.gen_range(0.5..3.0);
                if rng.gen() {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let s = rng.gen_range(-0.2..0.2);
        let t = rng.gen_range(-0.2..0.2);
        worst = worst.max(finite_difference_error(&a, &lam, &m, s, t));
    }
    ensure(
        worst < FD_TOLERANCE,
        format!("finite difference error {worst:e}"),
    )?;
    Ok(format!(
        "rank 4, identity block, max FD rel err {worst:.2e}"
    ))
}

fn criterion_3() -> Check {
    let pts: Vec<LatticeVector> = [[3, 0], [0, 3], [-3, -3]]
        .iter()
        .map(|v| LatticeVector::new(v.to_vec()))
        .collect();
    let torsion = quotient_torsion(&pts, 2).map_err(|e| e.to_string())?;
    ensure(
        torsion == vec![BigInt::from(3), BigInt::from(3)],
        format!("torsion {torsion:?}"),
    )?;
    let fan = projective_space_fan(2).map_err(|e| e.to_string())?;
    let table = ContactCollection::from_points(&fan, &pts)
        .map_err(|e| e.to_string())?
        .coefficient_table();
    let mod3 = separability_rank(2, &table, ch(3)).map_err(|e| e.to_string())?;
    let over_q = separability_rank(2, &table, Characteristic::ZERO).map_err(|e| e.to_string())?;
    ensure(
        mod3.rank < 2 && over_q.rank == 2,
        format!("ranks {} mod 3, {} over Q", mod3.rank, over_q.rank),
    )?;
    let generated = p2_collection(7, ch(5))?.coefficient_table();
    let mod5 = separability_rank(2, &generated, ch(5)).map_err(|e| e.to_string())?;
    ensure(
        mod5.rank == 2,
        format!("generated rank {} mod 5", mod5.rank),
    )?;
    Ok(format!(
        "torsion [3,3], rank {} mod 3, 2 over Q, 2 mod 5",
        mod3.rank
    ))
}

fn criterion_4() -> Check {
    let contacts = vec![vec![0, 2], vec![0, 3], vec![5, 0]];
    let x = vec![int(1), int(1)];
    let y = vec![int(1), int(128)];
    let sol = two_point_solve(1, &contacts, &x, &y, SolveMode::Exact).map_err(|e| e.to_string())?;
    let TwoPointSolution::Exact { markings } = sol else {
        return Err("no exact solution".into());
    };
    ensure(
        markings == vec![int(4), int(2), int(1)],
        format!("markings {markings:?}"),
    )?;
    let curve = build_curve(1, &normalized_markings(&markings), &contacts, &x)
        .map_err(|e| e.to_string())?;
    let image = evaluate(&curve, &b_zero());
    ensure(image == y, format!("image {image:?}"))?;
    Ok("markings (4,2,1), image at b_0 is exactly (1,128)".into())
}

fn criterion_5() -> Check {
    let cover = dihedral_cover(5, Characteristic::ZERO).map_err(|e| e.to_string())?;
    ensure(cover.certificate.certified(), "certificate failed")?;
    let mut got = cover.partitions();
    got.sort();
    ensure(
        got == vec![vec![2; 5], vec![2; 5], vec![5, 5]],
        format!("partitions {got:?}"),
    )?;
    let rh = riemann_hurwitz(10, &got).map_err(|e| e.to_string())?;
    ensure(rh.ramification == 18 && rh.genus == 0, format!("{rh:?}"))?;
    Ok("(2^5),(2^5),(5,5) certified, sum(e-1) = 18, g = 0".into())
}

fn criterion_6() -> Check {
    let k = klein_forms();
    ensure(
        (k.f.degree, k.h.degree, k.t.degree) == (12, 20, 30),
        "degrees",
    )?;
    // residual T^2 + H^3 - 1728 f^5 computed independently of the library check
    let ring = PolyRing::new(Rationals);
    let t2 = ring.form_pow(&k.t, 2);
    let h3 = ring.form_pow(&k.h, 3);
    let f5 = ring.form_pow(&k.f, 5);
    let residual = ring.form_combine(
        &BigRational::one(),
        &t2,
        &BigRational::one(),
        &ring.form_combine(&BigRational::one(), &h3, &int(-1728), &f5),
    );
    ensure(ring.form_is_zero(&residual), "syzygy residual is nonzero")?;
    ensure(k.syzygy() == Ok(Syzygy::MinusH), "library sign differs")?;
    let cover = icosahedral_cover(Characteristic::ZERO).map_err(|e| e.to_string())?;
    ensure(cover.certificate.certified(), "certificate failed")?;
    let mut got = cover.partitions();
    got.sort();
    ensure(
        got == vec![vec![2; 30], vec![3; 20], vec![5; 12]],
        "partitions",
    )?;
    let rh = riemann_hurwitz(60, &got).map_err(|e| e.to_string())?;
    ensure(
        rh.ramification == 118 && rh.euler_characteristic == 2 && rh.genus == 0,
        format!("{rh:?}"),
    )?;
    Ok("syzygy exact, degrees (12,20,30), (2^30),(3^20),(5^12), 120 - 118 = 2".into())
}

fn criterion_7() -> Check {
    let fin = |v: &[u64]| {
        v.iter()
            .map(|&m| Multiplicity::Finite(m))
            .collect::<Vec<_>>()
    };
    let c = klt_fano_check(&fin(&[2, 3, 5]));
    ensure(
        c.is_fano && c.degree == rational(1, 30),
        format!("(2,3,5) degree {}", c.degree),
    )?;
    let c = klt_fano_check(&fin(&[2, 3, 6]));
    ensure(
        !c.is_fano && c.degree.is_zero(),
        format!("(2,3,6) degree {}", c.degree),
    )?;
    for m in 2..=1000 {
        let c = klt_fano_check(&fin(&[2, 2, m]));
        ensure(
            c.is_fano && c.degree == rational(1, m as i64),
            format!("(2,2,{m})"),
        )?;
    }
    Ok("(2,3,5) at 1/30, (2,3,6) at 0, (2,2,m) Fano for m <= 1000".into())
}

fn criterion_8() -> Check {
    let z = Characteristic::ZERO;
    let covers = [
        cyclic_cover(4, z).map_err(|e| e.to_string())?,
        dihedral_cover(5, z).map_err(|e| e.to_string())?,
        icosahedral_cover(z).map_err(|e| e.to_string())?,
    ];
    for cover in &covers {
        let (n, b, r) = cover.log_normal_data();
        ensure(
            log_normal_degree(n, b, r) == 0,
            format!("{:?} base degree", cover.kind),
        )?;
        for d in 1..=20u64 {
            ensure(
                composed_log_normal_degree(cover, d, false) == 2 * d as i64 - 2,
                format!("{:?} d={d}", cover.kind),
            )?;
            ensure(
                composed_log_normal_degree(cover, d, true) == 2 * d as i64 - 3,
                format!("{:?} d={d} ramified", cover.kind),
            )?;
        }
    }
    Ok("base 0; 2d-2 for d = 1..20; 2d-3 with simple ramification".into())
}

fn criterion_9() -> Check {
    for dim in 1..=5u64 {
        for n in 1..=10u64 {
            ensure(
                toric_expected_dimension(dim, n) == expected_dimension(0, n, dim as i64),
                format!("dim {dim}, n {n}"),
            )?;
        }
    }
    ensure(toric_expected_dimension(2, 6) == 5, "P^2 with 6 markings")?;
    Ok("dim X + n - 3 = chi + 3g - 3 + n on the full grid".into())
}

fn snf_property(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let rows = rng.gen_range(1..=5);
    let cols = rng.gen_range(1..=5);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
        .collect();
    let a = IntegerMatrix::from_rows(&data).map_err(|e| e.to_string())?;
    let snf = smith_normal_form(&a);
    let back = snf
        .u
        .mul(&snf.d)
        .and_then(|ud| ud.mul(&snf.v))
        .map_err(|e| e.to_string())?;
    ensure(back == a, format!("U D V != A for {data:?}"))?;
    ensure(
        snf.u.is_unimodular() && snf.v.is_unimodular(),
        format!("non-unimodular factor for {data:?}"),
    )?;
    ensure(snf.d.is_diagonal(), "D not diagonal")?;
    let diag = snf.diagonal();
    ensure(
        diag.iter().all(|x| !x.is_negative()),
        "negative invariant factor",
    )?;
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        };
        ensure(ok, format!("divisibility chain broken in {diag:?}"))?;
    }
    Ok(())
}

fn report_bytes(args: &[&str]) -> Result<String, String> {
    let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
    Ok(run(&cli).map_err(|e| e.to_string())?.report.to_json())
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..SNF_SAMPLES {
        snf_property(&mut rng)?;
    }
    let fan = projective_space_fan(2).map_err(|e| e.to_string())?;
    let mut boxed = 0;
    for x in -5..=5 {
        for y in -5..=5 {
            if (x, y) == (0, 0) {
                continue;
            }
            let c = LatticeVector::new(vec![x, y]);
            let order = fan.decompose_contact_order(&c).map_err(|e| e.to_string())?;
            ensure(
                order.reassemble(&fan) == c,
                format!("round trip fails at ({x},{y})"),
            )?;
            ensure(
                order.decomposition.len() <= 2,
                format!("({x},{y}) uses more than one cone"),
            )?;
            boxed += 1;
        }
    }
    let seed = SEED.to_string();
    let contacts = "[[3,0],[3,0],[0,3],[0,3],[-3,-3],[-3,-3]]";
    for args in [
        vec![
            "campana",
            "build-curve",
            "--dim",
            "2",
            "--contacts",
            contacts,
            "--mult",
            "[2,2,2]",
            "--seed",
            &seed,
        ],
        vec![
            "campana",
            "jacobian-rank",
            "--dim",
            "2",
            "--contacts",
            contacts,
            "--seed",
            &seed,
            "--char",
            "7",
        ],
        vec!["campana", "p1-cover", "--case", "icosahedral"],
    ] {
        let first = report_bytes(&args)?;
        let second = report_bytes(&args)?;
        ensure(
            first == second,
            format!("{} reports differ between runs", args[1]),
        )?;
    }
    Ok(format!(
        "{SNF_SAMPLES} SNF samples, {boxed} box points, 3 reports byte-identical"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("P^2 Campana pipeline", criterion_1),
        ("Jacobian rank witness", criterion_2),
        ("separability mod p", criterion_3),
        ("two-point interpolation", criterion_4),
        ("dihedral m=5 cover", criterion_5),
        ("icosahedral cover", criterion_6),
        ("klt Fano boundary", criterion_7),
        ("log normal degree table", criterion_8),
        ("expected dimension", criterion_9),
        ("property suites", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
