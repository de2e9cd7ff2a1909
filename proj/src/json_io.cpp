#include "folitor/json_io.hpp"

#include <fstream>

namespace folitor {

Json field_to_json(const FourierField& field) {
    Json j;
    j["dim"] = axes_of(field.dim());
    j["cutoff"] = field.cutoff();
    Json modes = Json::array();
    // storage order is already lexicographic in (p, m, k)
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Complex c = field.coefficients()[i];
        if (c == Complex{0.0, 0.0}) continue;
        const ModeIndex n = field.mode_at(i);
        if (field.dim() == Torus::T3)
            modes.push_back(Json::array({n.p, n.m, n.k, c.real(), c.imag()}));
        else
            modes.push_back(Json::array({n.p, n.m, c.real(), c.imag()}));
    }
    j["modes"] = std::move(modes);
    return j;
}

FourierField field_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("cutoff") || !j.contains("modes"))
        throw ValidationError("field JSON needs dim, cutoff, modes");
    const int dim = j.at("dim").get<int>();
    if (dim != 2 && dim != 3) throw ValidationError("field dim must be 2 or 3");
    const int cutoff = j.at("cutoff").get<int>();
    if (cutoff < 0 || cutoff > 512) throw ValidationError("field cutoff out of range");
    FourierField f(dim == 3 ? Torus::T3 : Torus::T2, cutoff);
    for (const auto& row : j.at("modes")) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim + 2))
            throw ValidationError("field mode row has the wrong arity");
        ModeIndex n;
        n.p = row.at(0).get<int>();
        n.m = row.at(1).get<int>();
        n.k = dim == 3 ? row.at(2).get<int>() : 0;
        if (!f.in_band(n)) throw ValidationError("field mode outside the cutoff band");
        const double re = row.at(dim).get<double>();
        const double im = row.at(dim + 1).get<double>();
        f.set(n, Complex{re, im});
    }
    return f;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace folitor
