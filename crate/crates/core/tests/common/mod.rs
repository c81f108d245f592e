use lefschetz::ideal::{Generator, IdealSpec};
use lefschetz::monomial::ExponentVector;
use lefschetz::poly::HomogeneousForm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `x^a, y^b` plus up to three forms with small random coefficients.
pub fn random_binary_ideal(seed: u64) -> IdealSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = Vec::new();
    for var in 0..2 {
        let a = rng.gen_range(1..=7u32);
        let mut e = vec![0; 2];
        e[var] = a;
        gens.push(Generator::Form(HomogeneousForm::monomial(ExponentVector::new(e))));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let d = rng.gen_range(1..=6usize);
        let terms: Vec<_> = (0..=d as u32)
            .map(|i| (ExponentVector::new(vec![i, d as u32 - i]), rng.gen_range(-9i64..=9)))
            .collect();
        let f = HomogeneousForm::from_terms(2, d, terms).expect("binary form");
        if !f.is_zero() {
            gens.push(Generator::Form(f));
        }
    }
    IdealSpec::new(2, gens).expect("valid ideal")
}
