//! Shared input generators for the benchmark suite.

use pdcentral::{Diagram, PlanePoint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A reproducible random diagram with `len` points in a fixed window.
pub fn random_diagram(rng: &mut ChaCha8Rng, len: usize) -> Diagram {
    let points = (0..len)
        .map(|_| {
            let birth: f64 = rng.gen_range(-2.0..6.0);
            let persistence: f64 = rng.gen_range(0.05..4.0);
            PlanePoint::new(birth, birth + persistence).unwrap()
        })
        .collect();
    Diagram::new(points)
}

/// The three-diagram family used by the central-tendency benchmarks.
pub fn moving_point_family(z: f64) -> Vec<Diagram> {
    let fixed = Diagram::new(vec![
        PlanePoint::new(0.0, 2.0).unwrap(),
        PlanePoint::new(3.0, 5.0).unwrap(),
    ]);
    let moving = Diagram::new(vec![PlanePoint::new(1.0, z).unwrap()]);
    vec![fixed, moving, Diagram::empty()]
}
