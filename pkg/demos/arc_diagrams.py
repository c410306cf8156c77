"""Walk through the pairing-word combinatorics behind the moment bounds.

Enumerates small configurations, analyzes one 6-arc reference word, and
evaluates the convergence thresholds that the diagrams feed into.
"""

from siltlab.arcs import (
    PairConfiguration,
    build_spanning_sets,
    classify_gaps,
    compute_u_vectors,
    connected_components,
    convergence_exponents,
    enumerate_configurations,
    enumerate_m_assignments,
    find_free_variables,
    find_isolated_intervals,
    relabeling_classes,
)


def main() -> None:
    print("configuration counts (raw words / relabeling classes):")
    for n in range(1, 5):
        configs = enumerate_configurations(n)
        classes = relabeling_classes(configs)
        print(f"  n={n}: {len(configs):>5} words, {len(classes):>4} classes")
    print()

    word = "r1,r2,s2,r3,r4,s1,s3,r5,s4,s5,r6,s6"
    c = PairConfiguration.from_string(word)
    print(f"reference word {word}:")
    tags = classify_gaps(c)
    for v, tag in zip(compute_u_vectors(c), tags):
        print(f"  u_{v.gap_index:<2} = {v.coefficients}  {tag}")
    s_free, r_free = find_free_variables(c)
    print(f"  s-free {sorted(s_free)}, r-free {sorted(r_free)}, "
          f"isolated {sorted(find_isolated_intervals(c))}")
    print(f"  components: "
          f"{[b.to_string() for b in connected_components(c)]}")
    print()

    crossing = PairConfiguration.from_string("r1,r2,s1,s2")
    print("crossing pair r1,r2,s1,s2: spanning sets per multiplicity vector:")
    for m in enumerate_m_assignments(crossing):
        result = build_spanning_sets(crossing, m)
        print(f"  m={m.m}: A gaps {result.a_gaps}, B gaps {result.b_gaps}")
    print()

    print("convergence thresholds (d > 1 needed, >= 1 in restricted time):")
    cases = [
        ("space, H=0.3, lam=0.2", dict(hurst=0.3, lam=0.2, mode="y")),
        ("space, H=0.45, lam=0.2", dict(hurst=0.45, lam=0.2, mode="y")),
        ("time,  H=0.3, gamma=0.7", dict(hurst=0.3, gamma=0.7, mode="t")),
        ("restricted space, H=0.5, lam=0", dict(hurst=0.5, lam=0.0, mode="y",
                                                restricted=True)),
        ("restricted time,  H=0.5, gamma=0.75", dict(hurst=0.5, gamma=0.75,
                                                     mode="t", restricted=True)),
    ]
    for label, kwargs in cases:
        rep = convergence_exponents(**kwargs)
        verdict = "converges" if rep.converges else "diverges"
        print(f"  {label:<36} d = {rep.d_value:.4f} -> {verdict}")


if __name__ == "__main__":
    main()
