"""Fit the performance model on the bundled study tables and read off
which task measurements and architecture ingredients matter."""

from spanmeta import (
    ArchitectureFeatures,
    SpanTypeProfile,
    ablate,
    fit_meta_model,
    load_embedded,
    predict_f1,
    select_alpha,
    to_observations,
)

observations = to_observations(load_embedded())
print(f"{len(observations)} observations: 36 span types x 12 architectures")

model = fit_meta_model(observations)
print(f"\nsignificant coefficients (of {len(model.column_names)}):")
rows = sorted(
    zip(model.column_names, model.coefficients, model.p_values, model.significant),
    key=lambda r: -abs(r[1]),
)
for name, coef, p, sig in rows:
    if sig and name != "intercept":
        print(f"  {name:22s} {coef:+.3f}   p={p:.2e}")

# held-out quality: drop one span type, fit on the rest, predict it
print("\nleave-one-type-out ablation (mean abs error in F1 points):")
for name, result in ablate(observations).items():
    r2 = "  --" if result.r2 is None else f"{result.r2:.2f}"
    print(f"  {name:16s} MAE={result.mae:5.2f}  r2={r2}")

# what the model expects for a new task/architecture pairing
frequent_easy = SpanTypeProfile("query", 20000, 1.5, 2.5, 1.5)
rare_hard = SpanTypeProfile("query", 40, 8.0, 0.4, 0.5)
crf_bert = ArchitectureFeatures(has_feat=False, has_crf=True, has_lstm=False, has_bert=True)
plain = ArchitectureFeatures(has_feat=False, has_crf=False, has_lstm=False, has_bert=False)
print("\npredicted F1:")
for label, prof in (("frequent, distinct", frequent_easy), ("rare, bland", rare_hard)):
    for aname, arch in (("bert+crf", crf_bert), ("plain", plain)):
        print(f"  {label:20s} {aname:10s} {predict_f1(model, arch, prof):5.1f}")

best = select_alpha(observations)
print(f"\ncross-validated choice of logit padding: {best}")
