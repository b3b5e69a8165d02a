//! Fixtures shared by the benchmarks.

use circlefix::{gen_product, gen_standard_cpn, FixedPointData};

/// `CP^n` with `m_j = j^2`, so that all weights are distinct.
pub fn cpn(n: usize) -> FixedPointData {
    let m: Vec<i64> = (0..=n as i64).map(|j| j * j).collect();
    gen_standard_cpn(&m).expect("distinct entries")
}

/// `CP^a x CP^b` with factors built from `m_j = j` and `m_j = 2j`.
pub fn product(a: usize, b: usize) -> FixedPointData {
    let ma: Vec<i64> = (0..=a as i64).collect();
    let mb: Vec<i64> = (0..=b as i64).map(|j| 2 * j).collect();
    gen_product(&gen_standard_cpn(&ma).expect("distinct"), &gen_standard_cpn(&mb).expect("distinct"))
        .expect("valid factors")
}
