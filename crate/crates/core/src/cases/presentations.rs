//! Presentation texts for the case studies. Exponents written as `r`, `s`,
//! `t` or `{1-r}` are filled in from the parameter assignment.

pub const H4: &str = "p=2 n=4 d=2
x1^2 = x4
[x2,x1] = x3";

pub const H6: &str = "p=2 n=5 d=2
x1^2 = x4
x2^2 = x5
[x2,x1] = x3";

pub const FINAL_2379: &str = "p=2 n=11 d=2
[x2,x1] = x3
[x3,x1] = x6
[x3,x2] = x7
[x4,x2] = x8
[x4,x3] = x10
[x5,x1] = x6 x7 x8 x9 x10
[x5,x3] = x10 x11
[x5,x4] = x10 x11
[x6,x1] = x9
[x8,x1] = x10
[x8,x2] = x10 x11
[x9,x1] = x11
x1^2 = x4
x2^2 = x5
x3^2 = x6 x8 x9 x10
x4^2 = x7 x11^r
x5^2 = x6 x9 x10^s x11^t
x6^2 = x9 x10 x11
x7^2 = x10 x11
x9^2 = x11";

pub const FINAL_445: &str = "p=2 n=8 d=2
[x2,x1] = x3
[x3,x1] = x5
[x3,x2] = x6
[x4,x2] = x5 x6 x7 x8
[x4,x3] = x7
[x5,x1] = x7
[x5,x2] = x8
[x5,x3] = x8
[x5,x4] = x8
[x7,x1] = x8
[x7,x2] = x8
x1^2 = x4
x2^2 = x5 x7
x3^2 = x6 x7
x4^2 = x8^r
x6^2 = x8";

pub const FINAL_1015: &str = "p=2 n=9 d=2
[x2,x1] = x3
[x3,x1] = x5
[x3,x2] = x8 x9^{1-r}
[x4,x2] = x5 x7 x8 x9^r
[x4,x3] = x7
[x5,x1] = x7
[x5,x2] = x9
[x5,x3] = x9
[x5,x4] = x9
[x7,x1] = x9
[x7,x2] = x9
x1^2 = x4
x2^2 = x5 x7
x3^2 = x7 x8 x9^{1-r}
x4^2 = x6
x6^2 = x8
x8^2 = x9";

/// Elementary abelian of rank 2.
pub const C2XC2: &str = "p=2 n=2 d=2";

/// `[2,4]`: `x1` of order 4.
pub const C2XC4: &str = "p=2 n=3 d=2
x1^2 = x3";

/// Dihedral of order 8.
pub const D4: &str = "p=2 n=3 d=2
[x2,x1] = x3";

/// Quaternion of order 8.
pub const Q8: &str = "p=2 n=3 d=2
x1^2 = x3
x2^2 = x3
[x2,x1] = x3";
