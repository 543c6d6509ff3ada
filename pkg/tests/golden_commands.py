"""CLI arguments that regenerate each golden table in ``tests/golden``."""

GOLDEN = {
    "f1_eval_exp_neg2x.csv": "--command eval --fn exp_neg2x --n 5 --n 10 --n 500 --n 1000 --a 1.5 --grid 0:2:0.05",
    "f2_eval_identity.csv": "--command eval --fn identity --n 100 --n 500 --grid 0:1:0.05",
    "f3_eval_shifted_cubic.csv": "--command eval --fn shifted_cubic --n 15 --n 30 --n 500 --n 1000 --grid 0:1:0.05",
    "f4_compare_cube.csv": "--command compare --fn cube --n 10 --grid 0:1:0.05",
    "f5_compare_reciprocal.csv": "--command compare --fn reciprocal --n 4 --n 20 --grid 0:1:0.05",
    "f6_compare_cos_pi.csv": "--command compare --fn cos_pi --n 5 --grid 0:1:0.05",
    "f7_bivariate.csv": "--command bivariate --m 5 --m 10 --m 20 --a 3 --grid 0:1:0.1",
    "f8_bivariate.csv": "--command bivariate --m 100 --m 500 --a 3 --grid 0:1:0.1",
}
