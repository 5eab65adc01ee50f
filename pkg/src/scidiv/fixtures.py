"""Bundled reference data.

``reference_scores.csv`` holds diversity scores for 27 research
organizations under the cosine and weighted-path variants.
The two micro-graphs are the three-SC configuration where I and J are linked
only through K, in two weightings.
"""

from importlib import resources

from scidiv.basemap import Basemap


def fixture_path(name):
    return resources.files("scidiv.data").joinpath(name)


def reference_scores():
    from scidiv.diversity import read_scores

    with resources.as_file(fixture_path("reference_scores.csv")) as p:
        return read_scores(p)


def chain_basemap():
    """I - K - J with distances 0.3 and 0.4; no I-J edge."""
    return Basemap.from_distances(("I", "J", "K"), {("K", "I"): 0.3, ("K", "J"): 0.4})


def triangle_basemap():
    """I - K - J with light hops (0.1 each); I-J below threshold, so unlinked."""
    return Basemap.from_distances(("I", "J", "K"), {("I", "K"): 0.1, ("K", "J"): 0.1})
