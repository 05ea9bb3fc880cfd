//! Shared fixtures for the benchmarks.

use dynaheight::varieties::{build_periodic, AmbientVariety, PeriodicSubvariety, Signature};
use dynaheight::Poly;

pub fn quadratic() -> Poly {
    "x^2 + 1".parse().unwrap()
}

pub fn line() -> AmbientVariety {
    AmbientVariety::parse("x2 - x1 - 1", 2, 1).unwrap()
}

/// `x2 = f^l(x1)` for `f = x^2 + 1`.
pub fn graph_of_iterate(l: u32) -> PeriodicSubvariety {
    let f = quadratic();
    let g = f.iterate(l, 1 << 12).unwrap();
    let sig = Signature::new(2, vec![], vec![vec![1, 2]]).unwrap();
    build_periodic(sig, vec![], vec![vec![g]], &f, None).unwrap()
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_build() {
        assert_eq!(super::graph_of_iterate(2).n(), 2);
    }
}
