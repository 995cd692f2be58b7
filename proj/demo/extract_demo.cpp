// Pull a length-10 zero-sum subsequence out of a random length-44 sequence
// over C_5 + C_5, following the constructive proof, and print the trace.

#include <zerosum.hpp>

#include <iostream>
#include <random>

int main(int argc, char **argv)
{
    using namespace zerosum;
    std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 1;
    AbelianGroup G({5, 5});
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> pick(0, G.order() - 1);
    GSeq S(G);
    for (int i = 0; i < 44; ++i)
        S.add(G.element_at(pick(rng)));

    auto plan = extract_main_theorem(S, 2);
    for (const auto &n : plan.notes)
        std::cout << "# " << n << "\n";
    for (const auto &step : plan.trace)
        std::cout << step.role << " [" << step.sequence.length() << "]: " << step.sequence.str() << "\n";
    std::cout << "verified: " << std::boolalpha << verify_extraction(plan, S) << "\n";
}
