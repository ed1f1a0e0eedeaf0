from clocus.polycore.poly import MultiPoly, monomials_of_degree


def random_homogeneous(field, nvars, degree, rng, density=0.6):
    terms = {}
    for m in monomials_of_degree(nvars, degree):
        if rng.below(1000) < density * 1000:
            terms[m] = field.random_element(rng)
    return MultiPoly(field, nvars, terms)
