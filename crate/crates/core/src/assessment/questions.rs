use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const QUESTION_COUNT: usize = 17;

/// Process activity a question belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    CoreAsset,
    ProductDevelopment,
    Management,
}

impl Category {
    pub const ALL: [Category; 3] = [
        Category::CoreAsset,
        Category::ProductDevelopment,
        Category::Management,
    ];

    /// Leaf name used for this category in the final reduction tree.
    pub fn leaf_name(self) -> &'static str {
        match self {
            Category::CoreAsset => "core",
            Category::ProductDevelopment => "product",
            Category::Management => "management",
        }
    }

    pub fn from_leaf_name(name: &str) -> Option<Category> {
        Category::ALL.into_iter().find(|c| c.leaf_name() == name)
    }

    pub fn title(self) -> &'static str {
        match self {
            Category::CoreAsset => "Core Asset Process Assessment",
            Category::ProductDevelopment => "Product Development Process Assessment",
            Category::Management => "Management Process Assessment",
        }
    }

    pub fn questions(self) -> impl Iterator<Item = &'static Question> {
        QUESTIONS.iter().filter(move |q| q.category == self)
    }
}

/// Question identifier `q1` … `q17`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuestionId(u8);

impl QuestionId {
    pub fn new(n: u8) -> Option<Self> {
        (1..=QUESTION_COUNT as u8)
            .contains(&n)
            .then_some(QuestionId(n))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Zero-based position in a questionnaire.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn all() -> impl Iterator<Item = QuestionId> {
        (1..=QUESTION_COUNT as u8).map(QuestionId)
    }
}

impl fmt::Display for QuestionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

impl FromStr for QuestionId {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let digits = s.strip_prefix('q').ok_or(())?;
        if digits.starts_with('0') {
            return Err(());
        }
        digits
            .parse::<u8>()
            .ok()
            .and_then(QuestionId::new)
            .ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Question {
    pub id: QuestionId,
    pub category: Category,
    pub text: &'static str,
}

const fn q(n: u8, category: Category, text: &'static str) -> Question {
    Question {
        id: QuestionId(n),
        category,
        text,
    }
}

pub static QUESTIONS: [Question; QUESTION_COUNT] = [
    q(1, Category::CoreAsset, "Are all of the core assets within the software product line repository and are the resulting products consistent with the scope of the software product line?"),
    q(2, Category::CoreAsset, "Do all the components present in the core asset repository define the variability mechanism and tailor them for effective utilization?"),
    q(3, Category::CoreAsset, "Do all the COTS present or added into the core asset repository satisfy the cost-benefits ratio for the organization?"),
    q(4, Category::CoreAsset, "Is the core asset repository constantly updated with the addition of new assets as the product line progresses?"),
    q(5, Category::CoreAsset, "Does a version control management system keep track of the core asset development and utilization history?"),
    q(6, Category::ProductDevelopment, "Do all the products within the software product line share a common architecture?"),
    q(7, Category::ProductDevelopment, "Does the variation among products remain within the scope of the software product line?"),
    q(8, Category::ProductDevelopment, "Is every product released from the product line an effective business decision for the organization?"),
    q(9, Category::ProductDevelopment, "Does the software product line produce a considerable number of products; in other words, do they produce more than one product?"),
    q(10, Category::ProductDevelopment, "Does every product released from the software product line meet the qualification criteria of the organization?"),
    q(11, Category::Management, "Is there a configuration management system established to handle the configuration management issues present in the software product line?"),
    q(12, Category::Management, "Is a comprehensive description and analysis of the domain performed for the software product line?"),
    q(13, Category::Management, "Does the ROI (Return on Investment) of the software product line meet the organization's financial goal?"),
    q(14, Category::Management, "Are the requirements of the software product line clearly defined, analyzed, specified, verified and managed?"),
    q(15, Category::Management, "Does the requirement of the software product line define the fundamental products and their features within the product line?"),
    q(16, Category::Management, "Does the organizational structure support the software product line's concepts and principles?"),
    q(17, Category::Management, "Are the essential activities of software product line development performed iteratively?"),
];

pub fn question(id: QuestionId) -> &'static Question {
    &QUESTIONS[id.index()]
}
