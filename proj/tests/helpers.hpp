#pragma once

#include <functional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "gaussmink/errors.hpp"
#include "gaussmink/grid.hpp"

namespace testutil {

// Runs f and reports the name of the Error it throws ("none" if it returns).
inline std::string error_name(const std::function<void()>& f) {
    try {
        f();
    } catch (const gaussmink::Error& e) {
        return e.name();
    }
    return "none";
}

template <typename F>
gaussmink::ScalarField sample(const gaussmink::Grid& g, F&& fn) {
    Eigen::VectorXd v(g.size());
    for (int i = 0; i < g.size(); ++i) v[i] = fn(g.node(i));
    return gaussmink::make_field(g, std::move(v));
}

}  // namespace testutil
