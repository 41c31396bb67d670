#pragma once
// Whittaker functional Lambda_{psi_a} f = lim_r sum over x in P^{-r}/O of
// f(w n(x)) conj(psi_a(x)), genericity profiles and kernel quotients.

#include <map>
#include <string>

#include "nf/principal_series.hpp"

namespace nf {

enum class PsiClass { One, Eps, Pi, EpsPi };
const char* psi_class_name(PsiClass a);
PsiClass parse_psi_class(const std::string& s);
RElem psi_scaling(std::shared_ptr<const Ring> R, PsiClass a);

struct StabilizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Partial sum at radius r on every basis vector of S; with a shift y the
// integrand is f(w n(x) n(y)) conj(psi_a(x)).
CVec whittaker_partial(const FixedSpace& S, PsiClass a, int r, const RElem* shift = nullptr);

struct WhittakerRow {
    CVec values;     // Lambda on each basis vector
    int radius = 0;  // first r with S_r = S_{r+1}
    PsiClass a = PsiClass::One;
};
WhittakerRow whittaker_row(const FixedSpace& S, PsiClass a);

struct WhittakerValue {
    Cyclo value;
    int radius = 0;
    PsiClass a = PsiClass::One;
};
WhittakerValue whittaker_value(const PSVector& f, PsiClass a);

// Lambda on the basis vectors of a subspace given by coefficient vectors.
CVec whittaker_on(const SubSpace& V, PsiClass a);
SubSpace full_subspace(FixedSpacePtr S);

std::map<PsiClass, bool> genericity_profile(const SubSpace& component);
int kernel_quotient_dim(const SubSpace& space, PsiClass a);

// Orders the members so that member 1 is psi-generic.
PacketSplit label_by_genericity(PacketSplit P);

}  // namespace nf
