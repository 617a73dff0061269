"""The symplectic cut picture of the blow-up, checked numerically.

Run: python demos/04_symplectic_cut.py
"""

from gcx.cut import CutConfig, fd_convergence, non_action_field, reduced_form_check, slice_check, spinor_descent_check

for n in (1, 2, 3):
    for eps in (0.5, 1.0):
        rep = reduced_form_check(CutConfig(n, eps, samples=50))
        print(f"n={n} eps={eps}: max deviation {rep.values['max_deviation']:.2e}, "
              f"finite differences {rep.values['max_deviation_fd']:.2e}")

conv = fd_convergence(CutConfig(2, 1.0))
print("\ncentral-difference errors:", ["%.2e" % e for e in conv.values["errors"]], "order %.3f" % conv.values["order"])

print("\nslice:", {k: v for k, v in slice_check(CutConfig(2, 0.5, samples=50)).values.items()
                   if k.startswith("max")})

good = spinor_descent_check(CutConfig(2, 1.0, samples=50), base="R2")
bad = spinor_descent_check(CutConfig(2, 1.0, samples=50), base="R2", field_fn=non_action_field)
print("\ndescent residual with the circle action: %.2e" % good.values["residual_X_minus_i_dmu"])
print("descent residual with a non-action field: %.3f" % bad.values["residual_X_minus_i_dmu"])
