#pragma once

#include <gtd/errors.hpp>
#include <gtd/jet.hpp>
#include <gtd/expr.hpp>
#include <gtd/linalg.hpp>
#include <gtd/sections.hpp>
#include <gtd/system.hpp>
#include <gtd/geometry.hpp>
#include <gtd/phase_space.hpp>
#include <gtd/analysis.hpp>
#include <gtd/report.hpp>
