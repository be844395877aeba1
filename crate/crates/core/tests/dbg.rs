#[test]
fn find_failure() {
    use pdcentral::{Element, PNorm, PlanePoint, Selection};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let pt = |b: f64, d: f64| PlanePoint::new(b, d).unwrap();
    let mut rng = StdRng::seed_from_u64(42);
    for trial in 0..200 {
        let n: usize = 2 * rng.gen_range(0..=3) + 1;
        let k = rng.gen_range(0..=n);
        let points: Vec<PlanePoint> = (0..k)
            .map(|_| {
                let b: f64 = rng.gen_range(-2.0..4.0);
                pt(b, b + rng.gen_range(0.1..5.0))
            })
            .collect();
        let s = Selection::new(points.clone(), n - k).unwrap();
        let median = s.median();
        let median_cost = s.cost(&median, PNorm::ONE);
        let diag_cost = s.cost(&Element::Diagonal, PNorm::ONE);
        // burn the same RNG draws as the real test
        for _ in 0..60 {
            let _b: f64 = rng.gen_range(-3.0..5.0);
            let _d: f64 = rng.gen_range(0.05..6.0);
        }
        if diag_cost < median_cost - 1e-12 {
            println!("trial {trial}: n={n} k={k}");
            for p in &points { println!("  ({}, {})", p.birth(), p.death()); }
            println!("median = {median:?}, median_cost = {median_cost}, diag_cost = {diag_cost}");
            panic!("found");
        }
    }
}
