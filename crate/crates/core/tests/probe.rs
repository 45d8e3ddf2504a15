// temporary diagnostics; removed before release
use ifsjacobi::jacobi::rkpw_jacobi;
use ifsjacobi::IfsSystem;

#[test]
#[ignore]
fn profile_balanced_errors() {
    let ifs = IfsSystem::cantor();
    let j14 = rkpw_jacobi(&ifs.balanced_atoms(14).unwrap(), 512).unwrap();
    let j12 = rkpw_jacobi(&ifs.balanced_atoms(12).unwrap(), 512).unwrap();
    for refn in [19u32, 21] {
        let jr = rkpw_jacobi(&ifs.balanced_atoms(refn).unwrap(), 512).unwrap();
        println!("=== reference level {refn}");
        for j in [
            20usize, 30, 40, 50, 52, 54, 60, 70, 80, 90, 95, 100, 105, 110, 130, 150, 170, 180,
            185, 190, 195, 200, 210, 230, 250,
        ] {
            let d14 = (j14.offdiag(j) - jr.offdiag(j))
                .abs()
                .max((j14.diag()[j] - jr.diag()[j]).abs());
            let d12 = (j12.offdiag(j) - jr.offdiag(j))
                .abs()
                .max((j12.diag()[j] - jr.diag()[j]).abs());
            println!("j={j:4}  d12={d12:10.3e}  d14={d14:10.3e}");
        }
    }
}

#[test]
#[ignore]
fn dump_full_profile() {
    let ifs = IfsSystem::cantor();
    let j10 = rkpw_jacobi(&ifs.balanced_atoms(10).unwrap(), 256).unwrap();
    let j12 = rkpw_jacobi(&ifs.balanced_atoms(12).unwrap(), 256).unwrap();
    let jr = rkpw_jacobi(&ifs.balanced_atoms(19).unwrap(), 256).unwrap();
    for j in 1..200usize {
        let d10 = (j10.offdiag(j) - jr.offdiag(j)).abs();
        let d12 = (j12.offdiag(j) - jr.offdiag(j)).abs();
        let d1012 = (j10.offdiag(j) - j12.offdiag(j)).abs();
        println!("ROW {j} {d10:.6e} {d12:.6e} {d1012:.6e}");
    }
}

#[test]
#[ignore]
fn dump_table2_intermediates() {
    use ifsjacobi::equilibrium::SolverOptions;
    use ifsjacobi::pipelines::{attractor_jacobi, Budget};
    let ifs = IfsSystem::julia(2.1).unwrap();
    let reference = ifsjacobi::ifs::julia_exact_jacobi(2.1, 1024).unwrap();
    let out = attractor_jacobi(&ifs, 8, 13, 1e-10, 1.5, 1,
        &SolverOptions::default(), Some(&reference), &Budget::default()).unwrap();
    println!("expected N_prev: 11 7 24 55 112 224 451; N_cur: 7 24 55 112 224 451 943");
    for s in &out.report.steps {
        println!("T2 n={} G={} Nprev={:?} Ncur={:?} H={:?} Y={:?}",
            s.level, s.gauss_order, s.coarse_rank, s.fine_rank, s.coincidence, s.reference_rank);
    }
}

#[test]
#[ignore]
fn dump_sweep_both_conventions() {
    use ifsjacobi::equilibrium::{equilibrium_atoms, solve_gap_roots, SolverOptions};
    use ifsjacobi::jacobi::{averaged_coincidence_range, coincidence_range};
    let e = IfsSystem::julia(2.1).unwrap().level(3).unwrap();
    let sys = solve_gap_roots(&e, &SolverOptions::default()).unwrap();
    for k in 2..=10usize {
        let g = k * 100;
        let hi = equilibrium_atoms(&sys, g).unwrap();
        let lo = equilibrium_atoms(&sys, g - 1).unwrap();
        let nbar = lo.len();
        let jhi = rkpw_jacobi(&hi, nbar).unwrap();
        let jlo = rkpw_jacobi(&lo, nbar).unwrap();
        let p12 = coincidence_range(&jhi, &jlo, 1e-12);
        let a12 = averaged_coincidence_range(&jhi, &jlo, 1e-12);
        let p2 = coincidence_range(&jhi, &jlo, 1e-2);
        let a2 = averaged_coincidence_range(&jhi, &jlo, 1e-2);
        println!("SWEEP G={g} total={} point12={p12} avg12={a12} point2={p2} avg2={a2}", 8*g);
    }
}

#[test]
#[ignore]
fn stream_order_noise() {
    use ifsjacobi::equilibrium::{equilibrium_atoms, solve_gap_roots, SolverOptions};
    use ifsjacobi::jacobi::{coincidence_range, RkpwAccumulator};

    fn build(atoms: &[(f64, f64)], nbar: usize) -> ifsjacobi::JacobiMatrix {
        let mut acc = RkpwAccumulator::new(nbar).unwrap();
        for &(x, w) in atoms {
            acc.push(x, w);
        }
        acc.finish().unwrap()
    }
    // bit-reversal permutation of the index range
    fn bit_reversed(n: usize) -> Vec<usize> {
        let bits = (usize::BITS - (n - 1).leading_zeros()) as usize;
        let mut idx: Vec<usize> = (0..n)
            .map(|i| {
                let mut r = 0usize;
                for b in 0..bits {
                    if i >> b & 1 == 1 {
                        r |= 1 << (bits - 1 - b);
                    }
                }
                r
            })
            .collect();
        // stable compress to valid range
        let mut pairs: Vec<(usize, usize)> = idx.drain(..).enumerate().map(|(i, r)| (r, i)).collect();
        pairs.sort();
        pairs.into_iter().map(|(_, i)| i).collect()
    }

    let e = IfsSystem::julia(2.1).unwrap().level(3).unwrap();
    let sys = solve_gap_roots(&e, &SolverOptions::default()).unwrap();
    for g in [600usize, 1000] {
        let hi = equilibrium_atoms(&sys, g).unwrap();
        let lo = equilibrium_atoms(&sys, g - 1).unwrap();
        let nbar = lo.len();
        let asc_hi = build(hi.atoms(), nbar);
        let asc_lo = build(lo.atoms(), nbar);

        let perm_hi: Vec<(f64, f64)> = bit_reversed(hi.len()).into_iter().map(|i| hi.atoms()[i]).collect();
        let perm_lo: Vec<(f64, f64)> = bit_reversed(lo.len()).into_iter().map(|i| lo.atoms()[i]).collect();
        let rev_hi = build(&perm_hi, nbar);
        let rev_lo = build(&perm_lo, nbar);

        // noise estimate: same measure, two orders
        let mut noise_asc_rev = Vec::new();
        for j in [500usize, 1000, 2000, 3000, 4000, nbar.min(6000) - 1] {
            noise_asc_rev.push(format!(
                "j={j}:{:.2e}",
                (asc_hi.offdiag(j) - rev_hi.offdiag(j)).abs()
            ));
        }
        println!(
            "ORDER G={g} N12_asc={} N12_rev={} noise {}",
            coincidence_range(&asc_hi, &asc_lo, 1e-12),
            coincidence_range(&rev_hi, &rev_lo, 1e-12),
            noise_asc_rev.join(" ")
        );
    }
}
