/// Sentences mixing conjunction, disjunction, quantifiers and dependence
/// atoms at different depths.
pub const CORPUS: &[&str] = &[
    "exists z. forall x. exists y. dep(y, x) & y != z",
    "forall x. exists y z. dep(y, z) & x = z & y != c",
    "forall x. exists y. dep(x, y) & R(x, y)",
    "exists x. forall y. R(x, y) | exists z. dep(z) & P(z)",
    "(forall x. exists y. dep(x, y) & R(x, y)) | (exists z. forall w. dep(w, z) & P(z))",
    "forall x. (P(x) | exists y. dep(y) & R(x, y))",
    "(exists x. P(x)) & forall y. exists z. dep(y, z) & z != y",
    "forall x y. exists z. dep(x, z) & (R(x, z) | R(y, z))",
    "(exists x. dep(x) & P(x)) | forall y. ~P(y)",
    "forall x. exists y. (dep(x, y) | dep(y, x)) & R(x, y)",
    "forall x. exists y. dep(c, y) & R(y, x)",
    "forall x. (exists y. R(x, y) & dep(x, y)) & exists z. P(z) | z = x",
    "dep() & forall x. P(x) | ~P(c)",
];
