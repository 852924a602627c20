# Walk through the pipeline by hand on z^2 - x*y^2.
# Every stage is a plain function call, so each intermediate object can be printed.

from vanzone.cli import parse_polynomial
from vanzone.geometry import (
    SurfaceGerm,
    check_sheets,
    discriminant_surface,
    genericity_check,
    singular_locus,
    theta_reduce,
    transversal_invariants,
)
from vanzone.puiseux import nested_expand
from vanzone.carrousel import approximation_tori, build_zone_ladder
from vanzone.assembly import (
    SampleScales,
    TrunkStub,
    assemble_graph,
    compare_with_trunk,
    fill_solid_tori,
    sample_fibre,
    vertical_monodromy,
    zone_pieces,
)

f = parse_polynomial("z^2 - x*y^2")
print(genericity_check(f))

germ = SurfaceGerm(f)
[sigma] = singular_locus(germ)
print("singular branch:", sigma)

g = theta_reduce(germ, sigma)
N = check_sheets(g)
inv = transversal_invariants(g)
print("sheets", N, "| transversal type", inv)  # mu = 1: an annulus

disc = discriminant_surface(g)
print("D =", disc.D, "  raw resultant =", disc.raw)

branches = nested_expand(disc.D, 5, multiplicities=disc.multiplicity_map())
for b in branches:
    print("branch pair", b.pair, "b =", b.b.to_text(), "d =", b.d)

ladder = build_zone_ladder(branches)
for z in ladder.zones:
    print(z.describe())
tori = approximation_tori(branches, ladder)
for t in tori:
    print(t.l, "suns, rho =", t.rho)
    for c in t.certificates:
        print("   ", c)

# One numeric fibre x = a, t = eta: the loops are read off by root tracking
sample = sample_fibre(g.f, disc.D, branches, ladder, N, SampleScales())
print("x-loop on sheets:", sample.boundaries[-1].h)
print("x-loop on suns:  ", sample.sun_transport)

mono = vertical_monodromy(g, branches, sample=sample, fiber=inv, N=N)
fills = fill_solid_tori(tori, mono, N)
pieces = zone_pieces(ladder, tori, mono, N, fills)
for p in pieces:
    print(p.describe())

graph = assemble_graph(pieces, mono, TrunkStub(1))
print("Q-manifold:", graph.q_manifold_flag, " s =", graph.s, " r =", graph.boundary_tori)
print(compare_with_trunk(graph, irreducible=mono.irreducible))
print(compare_with_trunk(graph, TrunkStub(1, solid_torus_flag=True), irreducible=mono.irreducible))
