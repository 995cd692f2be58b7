// Exact s_n(C_n) and s_n(C_n^2) for small n, next to the bounds the library
// can prove for the same lengths.

#include <zerosum.hpp>

#include <iostream>

int main()
{
    using namespace zerosum;
    for (std::int64_t n : {2, 3, 4, 5}) {
        auto cyclic = AbelianGroup({n});
        auto rec = exact_s(cyclic, n);
        std::cout << "s_" << n << "(C_" << n << ") = " << rec.value << "  (avoider of length "
                  << rec.witness->length() << ": " << rec.witness->str() << ")\n";
    }
    for (std::int64_t n : {2, 3}) {
        AbelianGroup G({n, n});
        auto rec = exact_s(G, n);
        auto best = best_upper(G, n);
        std::cout << "s_" << n << "(C_" << n << "^2) = " << rec.value << ", best proven upper bound "
                  << (best.value ? std::to_string(*best.value) : std::string("none")) << "\n";
        for (const auto &line : best.trace)
            std::cout << "    " << line << "\n";
    }
}
