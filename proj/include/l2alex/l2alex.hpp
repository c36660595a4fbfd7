#pragma once

#include "l2alex/abelianization.hpp"
#include "l2alex/alexander.hpp"
#include "l2alex/constructions.hpp"
#include "l2alex/diagram.hpp"
#include "l2alex/errors.hpp"
#include "l2alex/fk.hpp"
#include "l2alex/fox.hpp"
#include "l2alex/group_ring.hpp"
#include "l2alex/l2.hpp"
#include "l2alex/laurent.hpp"
#include "l2alex/oracle.hpp"
#include "l2alex/presentation.hpp"
#include "l2alex/tietze.hpp"
#include "l2alex/word.hpp"
