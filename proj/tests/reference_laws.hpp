#ifndef MAGMALAWS_TESTS_REFERENCE_LAWS_HPP
#define MAGMALAWS_TESTS_REFERENCE_LAWS_HPP

// Named laws with their published numbers.

#include <cstdint>
#include <string_view>

namespace reference {

struct NumberedLaw {
  std::uint64_t number;
  std::string_view text;
};

inline constexpr NumberedLaw kNumberedLaws[] = {
    {1, "x = x"},
    {2, "x = y"},
    {3, "x = x*x"},
    {4, "x = x*y"},
    {5, "x = y*x"},
    {10, "x = x*(y*x)"},
    {11, "x = x*(y*y)"},
    {14, "x = y*(x*y)"},
    {23, "x = (x*x)*x"},
    {40, "x*x = y*y"},
    {41, "x*x = y*z"},
    {43, "x*y = y*x"},
    {46, "x*y = z*w"},
    {47, "x = x*(x*(x*x))"},
    {73, "x = y*(y*(x*y))"},
    {151, "x = (x*x)*(x*x)"},
    {168, "x = (y*x)*(x*z)"},
    {206, "x = (x*(x*y))*y"},
    {255, "x = ((x*x)*x)*x"},
    {327, "x*y = x*(y*z)"},
    {378, "x*y = (x*y)*y"},
    {395, "x*y = (z*x)*y"},
    {413, "x = x*(x*(x*(y*x)))"},
    {450, "x = x*(y*(z*(y*x)))"},
    {492, "x = y*(x*(z*(z*y)))"},
    {543, "x = y*(z*(x*(y*z)))"},
    {650, "x = x*(y*((z*x)*y))"},
    {677, "x = y*(x*((y*x)*y))"},
    {817, "x = x*((x*x)*(x*x))"},
    {854, "x = x*((y*z)*(x*z))"},
    {1045, "x = x*((y*(y*x))*x)"},
    {1055, "x = x*((y*(z*x))*x)"},
    {1110, "x = y*((y*(x*x))*y)"},
    {1117, "x = y*((y*(x*z))*z)"},
    {1286, "x = y*(((x*y)*x)*y)"},
    {1323, "x = y*(((y*y)*x)*y)"},
    {1485, "x = (y*x)*(x*(z*y))"},
    {1518, "x = (y*y)*(x*(y*x))"},
    {1571, "x = (y*z)*(y*(x*z))"},
    {1629, "x = (x*x)*((x*x)*x)"},
    {1648, "x = (x*y)*((x*y)*y)"},
    {1659, "x = (x*y)*((y*y)*z)"},
    {1689, "x = (y*x)*((x*z)*z)"},
    {1729, "x = (y*y)*((y*x)*y)"},
    {2301, "x = (y*(x*(y*x)))*y"},
    {2441, "x = (x*((x*x)*x))*x"},
    {2744, "x = ((y*y)*(y*x))*y"},
    {2910, "x = ((y*(x*y))*x)*y"},
    {3316, "x*y = x*(y*(x*y))"},
    {3523, "x*y = x*((y*y)*z)"},
    {3737, "x*y = (x*z)*(y*z)"},
    {3925, "x*y = (x*(y*x))*y"},
    {4315, "x*(y*x) = x*(y*z)"},
    {4380, "x*(x*x) = (x*x)*x"},
    {4482, "x*(y*y) = (y*y)*x"},
    {4512, "x*(y*z) = (x*y)*z"},
    {4531, "x*(y*z) = (y*z)*x"},
    {5093, "x = y*(y*(y*(x*(z*y))))"},
    {345169, "x = (y*((x*y)*y))*(x*(z*y))"},
    {42302852, "x = y*((((x*x)*x)*z)*(((x*x)*y)*z))"},
    {42302946, "x = y*((((x*x)*x)*z)*(((y*y)*y)*z))"},
    {42323216, "x = y*((((y*y)*x)*z)*(((y*y)*y)*z))"},
    {67953597, "x = (y*y)*(y*((x*z)*(((x*x)*y)*z)))"},
    {89176740, "x = ((y*y)*y)*((((x*x)*x)*z)*(y*z))"},
    {102744082, "x = ((y*y)*((x*z)*x))*((z*w)*(x*w))"},
    {147976245, "x = ((y*y)*(y*(x*(((y*y)*y)*z))))*z"},
};

}  // namespace reference

#endif  // MAGMALAWS_TESTS_REFERENCE_LAWS_HPP
