#include "dloc/lattice.hpp"

#include <stdexcept>
#include <string>

namespace dloc {

LatticeBox::LatticeBox(int L) : L_(L) {
    if (L < 1) throw std::invalid_argument("LatticeBox: L must be positive, got " + std::to_string(L));
    if (L > 20000) throw std::invalid_argument("LatticeBox: L too large for the index map");
}

std::vector<Site> LatticeBox::boundary() const {
    std::vector<Site> out;
    const int M = L_ + 1;
    for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
            if (std::abs(a) == M || std::abs(b) == M) out.push_back({a, b});
    return out;
}

TorusGrid::TorusGrid(int m) : m_(m), n_(0) {
    if (m < 1 || m > 14) throw std::invalid_argument("TorusGrid: exponent must be in [1, 14], got " + std::to_string(m));
    n_ = 1 << m;
}

DecayProfile::DecayProfile(double sigma) : sigma_(sigma) {
    if (!(sigma >= 0.0 && sigma <= 0.5))
        throw std::invalid_argument("DecayProfile: sigma must lie in [0, 1/2], got " + std::to_string(sigma));
}

EnergyWindow::EnergyWindow(double tau, bool complement) : tau_(tau), complement_(complement) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("EnergyWindow: tau must lie in (0, 1), got " + std::to_string(tau));
}

}  // namespace dloc
