use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let f = liftlab::modforms::NewformTable::catalog("delta", 100_001).unwrap();
    println!("delta expand to 1e5: {:.2?}", t0.elapsed());
    let t0 = Instant::now();
    let primes = liftlab::arith::PrimeSet::sieve(100_000).unwrap();
    println!("sieve 1e5: {:.2?} ({} primes)", t0.elapsed(), primes.count());
    let chi = liftlab::characters::DirichletCharacter::from_index(4, 0).unwrap();
    let ctx = liftlab::shimura::LiftContext::new(f, chi, 6, 1).unwrap();
    let t0 = Instant::now();
    let fam = ctx.build_family(1, &primes).unwrap();
    println!("family: {:.2?} ({} entries)", t0.elapsed(), fam.entries.len());
    let t0 = Instant::now();
    let entries = liftlab::densities::classified_entries(&fam);
    let phi = liftlab::characters::PhaseFraction::zero();
    let params = liftlab::densities::DensityParams {
        mode: "exact".into(), form: Some("delta".into()), char_modulus: 4, char_index: 0,
        char_exponents: vec![0], k: 6, level_n: 1, t: 1, nu: 1, phi: "0/1".into(),
        x: 100_000, seed: None, order: Some(100_001),
    };
    let report = liftlab::densities::fiber_densities(&entries, &fam.image, fam.chi_order, phi,
        fam.pi_x, fam.excluded.len() as u64, fam.x, params, vec![]);
    println!("densities: {:.2?}", t0.elapsed());
    println!("pi_x={} pos={} neg={} zero={} dev={:.5} sign_changes={}",
        report.pi_x, report.global.n_pos, report.global.n_neg, report.global.n_zero,
        report.global.dev_pos, report.global.sign_changes);
}
